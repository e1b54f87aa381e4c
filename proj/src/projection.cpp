#include "ofo/projection.hpp"

#include <cmath>
#include <limits>

#include "ofo/errors.hpp"

namespace ofo {

namespace {
constexpr double kSofteningPenalty = 1e4;
}

ConstraintSpec ConstraintSpec::from_network(const Network& network, const MonitorSet& monitors) {
    ConstraintSpec spec;
    input_bounds(network, spec.u_min, spec.u_max);
    spec.y_min = monitors.lower_bounds(network);
    spec.y_max = monitors.upper_bounds(network);
    return spec;
}

QpProblem build_projection_qp(const CompositeGradient& grad, const SensitivityMatrix& sens,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                              const ConstraintSpec& limits, double alpha,
                              const Eigen::MatrixXd& G) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ParameterError("gain alpha must lie in (0, 1]");
    const Eigen::Index m = u.size();
    if (grad.du.size() != m || sens.m.cols() != m || limits.u_min.size() != m ||
        limits.u_max.size() != m)
        throw ParameterError("projection QP input dimensions inconsistent");
    const Eigen::Index n_out = y.size();
    if (grad.dy.size() != n_out || sens.m.rows() != n_out || limits.y_min.size() != n_out ||
        limits.y_max.size() != n_out)
        throw ParameterError("projection QP output dimensions inconsistent");

    QpProblem qp;
    qp.G = G;

    // count rows first: one per finite bound side
    int n_input_rows = 0, n_output_rows = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::isfinite(limits.u_max(i))) ++n_input_rows;
        if (std::isfinite(limits.u_min(i))) ++n_input_rows;
    }
    for (Eigen::Index r = 0; r < n_out; ++r) {
        if (std::isfinite(limits.y_max(r))) ++n_output_rows;
        if (std::isfinite(limits.y_min(r))) ++n_output_rows;
    }

    qp.ineq_A.setZero(n_input_rows + n_output_rows, m);
    qp.ineq_b.resize(n_input_rows + n_output_rows);
    qp.input_row_count = n_input_rows;

    int row = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (std::isfinite(limits.u_max(i))) {
            qp.ineq_A(row, i) = alpha;
            qp.ineq_b(row) = limits.u_max(i) - u(i);
            ++row;
        }
        if (std::isfinite(limits.u_min(i))) {
            qp.ineq_A(row, i) = -alpha;
            qp.ineq_b(row) = u(i) - limits.u_min(i);
            ++row;
        }
    }
    for (Eigen::Index r = 0; r < n_out; ++r) {
        if (std::isfinite(limits.y_max(r))) {
            qp.ineq_A.row(row) = alpha * sens.m.row(r);
            qp.ineq_b(row) = limits.y_max(r) - y(r);
            ++row;
        }
        if (std::isfinite(limits.y_min(r))) {
            qp.ineq_A.row(row) = -alpha * sens.m.row(r);
            qp.ineq_b(row) = y(r) - limits.y_min(r);
            ++row;
        }
    }

    const Eigen::VectorXd reduced = grad.du + sens.m.transpose() * grad.dy;
    qp.gradient_term = Eigen::LLT<Eigen::MatrixXd>(G).solve(reduced);
    return qp;
}

ProjectionResult solve_projection(const QpProblem& problem) {
    ProjectionResult result;
    result.solution = solve_qp(problem);
    if (result.solution.status != QpStatus::infeasible) return result;

    // Soften the output rows with one shared slack s >= 0 penalized in the
    // objective; input boxes stay hard.
    const Eigen::Index m = problem.G.rows();
    const Eigen::Index n_rows = problem.ineq_A.rows();

    QpProblem soft;
    soft.G.setZero(m + 1, m + 1);
    soft.G.topLeftCorner(m, m) = problem.G;
    soft.G(m, m) = kSofteningPenalty;
    soft.gradient_term.setZero(m + 1);
    soft.gradient_term.head(m) = problem.gradient_term;

    soft.ineq_A.setZero(n_rows + 1, m + 1);
    soft.ineq_A.topLeftCorner(n_rows, m) = problem.ineq_A;
    for (Eigen::Index r = problem.input_row_count; r < n_rows; ++r) soft.ineq_A(r, m) = -1.0;
    soft.ineq_A(n_rows, m) = -1.0; // s >= 0
    soft.ineq_b.resize(n_rows + 1);
    soft.ineq_b.head(n_rows) = problem.ineq_b;
    soft.ineq_b(n_rows) = 0.0;
    soft.input_row_count = problem.input_row_count;

    const QpSolution inner = solve_qp(soft);
    result.softened = true;
    result.solution.w = inner.w.head(m);
    result.solution.multipliers = inner.multipliers.head(n_rows);
    result.solution.kkt_residual = inner.kkt_residual;
    result.solution.status = inner.status;
    result.solution.active_set.clear();
    for (int idx : inner.active_set)
        if (idx < n_rows) result.solution.active_set.push_back(idx);
    return result;
}

} // namespace ofo
