#include "ofo/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ofo/errors.hpp"

namespace ofo {

namespace {

constexpr double kStepTol = 1e-13;
constexpr double kMultiplierTol = 1e-11;
constexpr double kDirectionalTol = 1e-13;

// Least-distance problem  min ||z - z_target||^2  s.t.  rows * z <= rhs,
// solved by the textbook primal active-set iteration. Every working set keeps
// full row rank because a blocking row is never parallel to the current
// null-space step.
struct LeastDistanceCore {
    const Eigen::MatrixXd& rows;
    const Eigen::VectorXd& rhs;
    Eigen::VectorXd z;        // current feasible iterate
    Eigen::VectorXd z_target;
    std::vector<int> working; // active row indices
    Eigen::VectorXd lambda;   // full-length multipliers (valid after success)
    bool hit_iteration_cap = false;

    LeastDistanceCore(const Eigen::MatrixXd& rows_, const Eigen::VectorXd& rhs_,
                      Eigen::VectorXd z_start, Eigen::VectorXd target)
        : rows(rows_), rhs(rhs_), z(std::move(z_start)), z_target(std::move(target)) {
        lambda = Eigen::VectorXd::Zero(rows.rows());
    }

    void run() {
        const int n_rows = static_cast<int>(rows.rows());
        const int max_iterations = 100 + 25 * (static_cast<int>(z.size()) + n_rows);
        std::vector<char> in_working(n_rows, 0);

        for (int iter = 0; iter < max_iterations; ++iter) {
            const Eigen::VectorXd d = z_target - z;

            Eigen::VectorXd p;
            Eigen::VectorXd mu;
            if (working.empty()) {
                p = d;
            } else {
                const int k = static_cast<int>(working.size());
                Eigen::MatrixXd aw(k, z.size());
                for (int i = 0; i < k; ++i) aw.row(i) = rows.row(working[i]);
                const Eigen::MatrixXd s = aw * aw.transpose();
                Eigen::LLT<Eigen::MatrixXd> llt(s);
                if (llt.info() != Eigen::Success) {
                    hit_iteration_cap = true; // degenerate working set; bail out
                    return;
                }
                mu = llt.solve(aw * d);
                p = d - aw.transpose() * mu;
            }

            const double scale = std::max(1.0, z_target.norm());
            if (p.size() == 0 || p.lpNorm<Eigen::Infinity>() <= kStepTol * scale) {
                if (working.empty()) return; // unconstrained stationary point
                // multipliers of f = ||z - z_target||^2 on the working set
                double most_negative = -kMultiplierTol * scale;
                int drop = -1;
                for (int i = 0; i < static_cast<int>(working.size()); ++i) {
                    const double lam = 2.0 * mu(i);
                    if (lam < most_negative) {
                        most_negative = lam;
                        drop = i;
                    }
                }
                if (drop < 0) {
                    lambda.setZero();
                    for (int i = 0; i < static_cast<int>(working.size()); ++i)
                        lambda(working[i]) = std::max(0.0, 2.0 * mu(i));
                    return;
                }
                in_working[working[drop]] = 0;
                working.erase(working.begin() + drop);
                continue;
            }

            // largest step along p before an inactive row blocks
            double step = 1.0;
            int blocker = -1;
            for (int i = 0; i < n_rows; ++i) {
                if (in_working[i]) continue;
                const double denom = rows.row(i).dot(p);
                if (denom <= kDirectionalTol * std::max(1.0, p.norm())) continue;
                const double room = rhs(i) - rows.row(i).dot(z);
                const double t = room / denom;
                if (t < step - 1e-15) {
                    step = t;
                    blocker = i;
                } // equal ratios: keep the lowest row index, which an earlier i already holds
            }
            step = std::max(step, 0.0);

            z += step * p;
            if (blocker >= 0 && step < 1.0) {
                in_working[blocker] = 1;
                working.push_back(blocker);
            }
        }
        hit_iteration_cap = true;
    }
};

} // namespace

void QpProblem::validate() const {
    const auto m = G.rows();
    if (G.cols() != m || gradient_term.size() != m)
        throw ParameterError("QP metric/gradient dimensions inconsistent");
    if (!G.isApprox(G.transpose(), 1e-12))
        throw ParameterError("QP metric matrix is not symmetric");
    if (ineq_A.rows() != ineq_b.size())
        throw ParameterError("QP constraint rows and right-hand side differ in length");
    if (ineq_A.rows() > 0 && ineq_A.cols() != m)
        throw ParameterError("QP constraint matrix has wrong column count");
    if (input_row_count < 0 || input_row_count > ineq_A.rows())
        throw ParameterError("QP input row count out of range");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 1e-10)
        throw ParameterError("QP metric matrix is not positive definite");
}

double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& multipliers) {
    const Eigen::VectorXd grad = 2.0 * problem.G * (w + problem.gradient_term);
    double stationarity;
    if (problem.ineq_A.rows() > 0)
        stationarity =
            (grad + problem.ineq_A.transpose() * multipliers).lpNorm<Eigen::Infinity>();
    else
        stationarity = grad.lpNorm<Eigen::Infinity>();

    double feasibility = 0.0, complementarity = 0.0, dual = 0.0;
    if (problem.ineq_A.rows() > 0) {
        const Eigen::VectorXd slack = problem.ineq_b - problem.ineq_A * w;
        feasibility = std::max(0.0, (-slack).maxCoeff());
        complementarity = (multipliers.array() * slack.array()).abs().maxCoeff();
        dual = std::max(0.0, -multipliers.minCoeff());
    }
    return std::max({stationarity, feasibility, complementarity, dual});
}

QpSolution solve_qp(const QpProblem& problem) {
    problem.validate();
    const int m = static_cast<int>(problem.G.rows());
    const int n_rows = static_cast<int>(problem.ineq_A.rows());

    QpSolution sol;
    if (n_rows == 0) {
        sol.w = -problem.gradient_term;
        sol.multipliers.resize(0);
        sol.kkt_residual = 0.0;
        sol.status = QpStatus::optimal;
        return sol;
    }

    // feasible starting point: w = 0 when admissible, otherwise an elastic
    // relaxation min eps*||w||^2 + t^2 s.t. A w - t*viol <= b, t >= 0 started
    // from (0, 1), whose optimum has t = 0 exactly iff the problem is feasible
    Eigen::VectorXd w_start = Eigen::VectorXd::Zero(m);
    const double b_scale = std::max(1.0, problem.ineq_b.lpNorm<Eigen::Infinity>());
    if (problem.ineq_b.minCoeff() < -1e-12 * b_scale) {
        constexpr double kElasticEps = 1e-12;
        Eigen::VectorXd viol = (-problem.ineq_b).cwiseMax(0.0);

        Eigen::MatrixXd rows(n_rows + 1, m + 1);
        rows.setZero();
        rows.block(0, 0, n_rows, m) = problem.ineq_A;
        rows.block(0, m, n_rows, 1) = -viol;
        rows(n_rows, m) = -1.0;
        Eigen::VectorXd rhs(n_rows + 1);
        rhs.head(n_rows) = problem.ineq_b;
        rhs(n_rows) = 0.0;

        // scale to the least-distance form with metric diag(eps,..,eps,1)
        const double sqrt_eps = std::sqrt(kElasticEps);
        Eigen::MatrixXd rows_z = rows;
        rows_z.leftCols(m) /= sqrt_eps;
        Eigen::VectorXd z_start = Eigen::VectorXd::Zero(m + 1);
        z_start(m) = 1.0;

        LeastDistanceCore phase1(rows_z, rhs, z_start, Eigen::VectorXd::Zero(m + 1));
        phase1.run();
        if (phase1.hit_iteration_cap) {
            sol.w = Eigen::VectorXd::Zero(m);
            sol.multipliers = Eigen::VectorXd::Zero(n_rows);
            sol.kkt_residual = std::numeric_limits<double>::infinity();
            sol.status = QpStatus::max_iter;
            return sol;
        }
        const double t_final = phase1.z(m);
        if (t_final > 1e-7 * b_scale) {
            sol.w = Eigen::VectorXd::Zero(m);
            sol.multipliers = Eigen::VectorXd::Zero(n_rows);
            sol.kkt_residual = std::numeric_limits<double>::infinity();
            sol.status = QpStatus::infeasible;
            return sol;
        }
        w_start = phase1.z.head(m) / sqrt_eps;
    }

    // least-distance transform of the metric: z = L' w, target -L' g
    Eigen::LLT<Eigen::MatrixXd> llt(problem.G);
    if (llt.info() != Eigen::Success)
        throw ParameterError("QP metric Cholesky factorization failed");
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd rows_z =
        l.triangularView<Eigen::Lower>().solve(problem.ineq_A.transpose()).transpose();
    const Eigen::VectorXd z_target = -(l.transpose() * problem.gradient_term);
    const Eigen::VectorXd z_start = l.transpose() * w_start;

    LeastDistanceCore core(rows_z, problem.ineq_b, z_start, z_target);
    core.run();

    sol.w = l.transpose().triangularView<Eigen::Upper>().solve(core.z);
    sol.multipliers = core.lambda;
    sol.kkt_residual = kkt_residual(problem, sol.w, sol.multipliers);
    sol.status = (!core.hit_iteration_cap && sol.kkt_residual < 1e-8) ? QpStatus::optimal
                                                                      : QpStatus::max_iter;
    sol.active_set = core.working;
    std::sort(sol.active_set.begin(), sol.active_set.end());
    return sol;
}

} // namespace ofo
