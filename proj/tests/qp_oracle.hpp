#pragma once

// Test-only reference solver for the projection QP, independent of the
// active-set implementation: accelerated projected gradient ascent on the
// dual, whose projection is a clamp onto the nonnegative orthant. The primal
// is strictly convex, so the recovered w is unique even when the dual is not.

#include <Eigen/Dense>

#include "ofo/qp.hpp"

namespace ofo::test {

struct OracleResult {
    Eigen::VectorXd w;
    bool converged = false;
    int iterations = 0;
};

inline OracleResult solve_qp_dual_pg(const QpProblem& problem, double tol = 1e-11,
                                     int max_iterations = 400000) {
    const Eigen::MatrixXd q = 2.0 * problem.G;
    const Eigen::VectorXd c = 2.0 * (problem.G * problem.gradient_term);
    const Eigen::LLT<Eigen::MatrixXd> qchol(q);

    OracleResult result;
    if (problem.ineq_A.rows() == 0) {
        result.w = -problem.gradient_term;
        result.converged = true;
        return result;
    }

    const Eigen::MatrixXd& a = problem.ineq_A;
    const Eigen::MatrixXd aqat = a * qchol.solve(a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(aqat, Eigen::EigenvaluesOnly);
    const double lip = std::max(eig.eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / lip;

    auto primal = [&](const Eigen::VectorXd& lambda) -> Eigen::VectorXd {
        return -qchol.solve(c + a.transpose() * lambda);
    };
    auto pg_residual = [&](const Eigen::VectorXd& lambda) {
        const Eigen::VectorXd grad = a * primal(lambda) - problem.ineq_b;
        const Eigen::VectorXd next = (lambda + step * grad).cwiseMax(0.0);
        return (next - lambda).lpNorm<Eigen::Infinity>();
    };

    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(a.rows());
    Eigen::VectorXd momentum_point = lambda;
    double t = 1.0;
    double best_residual = std::numeric_limits<double>::infinity();

    for (int k = 0; k < max_iterations; ++k) {
        const Eigen::VectorXd grad = a * primal(momentum_point) - problem.ineq_b;
        const Eigen::VectorXd lambda_next = (momentum_point + step * grad).cwiseMax(0.0);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        momentum_point = lambda_next + ((t - 1.0) / t_next) * (lambda_next - lambda);

        const double residual = pg_residual(lambda_next);
        if (residual > best_residual * 10.0) { // adaptive restart
            momentum_point = lambda_next;
            t = 1.0;
        } else {
            t = t_next;
        }
        best_residual = std::min(best_residual, residual);
        lambda = lambda_next;
        if (residual < tol) {
            result.w = primal(lambda);
            result.converged = true;
            result.iterations = k + 1;
            return result;
        }
    }
    result.w = primal(lambda);
    result.iterations = max_iterations;
    return result;
}

} // namespace ofo::test
