#pragma once

#include <vector>

#include <Eigen/Dense>

namespace ofo {

/// Projection problem  min_w (w + g)' G (w + g)  s.t.  ineq_A w <= ineq_b,
/// with G positive definite and g the metric-scaled gradient term.
struct QpProblem {
    Eigen::MatrixXd G;
    Eigen::VectorXd gradient_term;
    Eigen::MatrixXd ineq_A;
    Eigen::VectorXd ineq_b;
    int input_row_count = 0; // leading rows of ineq_A that encode input boxes

    /// Throws ParameterError unless G is symmetric positive definite
    /// (smallest eigenvalue > 1e-10) and the constraint dimensions agree.
    void validate() const;
};

enum class QpStatus { optimal, infeasible, max_iter };

struct QpSolution {
    Eigen::VectorXd w;
    Eigen::VectorXd multipliers;  // one per constraint row
    std::vector<int> active_set;  // row indices binding at the solution
    double kkt_residual = 0.0;    // max of stationarity/feasibility/complementarity
    QpStatus status = QpStatus::optimal;
};

/// Primal active-set solver on the Cholesky-transformed least-distance form.
/// Starts from an elastic feasibility phase when w = 0 violates the
/// constraints. `optimal` is only returned with a full KKT certificate below
/// 1e-8.
QpSolution solve_qp(const QpProblem& problem);

/// Certificate residuals for a candidate primal/dual pair of `problem`.
double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& w,
                    const Eigen::VectorXd& multipliers);

} // namespace ofo
