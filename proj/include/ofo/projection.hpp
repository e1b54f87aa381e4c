#pragma once

#include <Eigen/Dense>

#include "ofo/objective.hpp"
#include "ofo/qp.hpp"
#include "ofo/sensitivity.hpp"

namespace ofo {

/// Box bounds on the input vector plus operating bands per monitored output.
/// Entries may be +/-infinity where a side is unconstrained.
struct ConstraintSpec {
    Eigen::VectorXd u_min, u_max;
    Eigen::VectorXd y_min, y_max;

    static ConstraintSpec from_network(const Network& network, const MonitorSet& monitors);
};

/// Assemble the projection QP around the current operating point: the
/// objective metric G with gradient term G^{-1}(grad_u + S' grad_y), input
/// box rows scaled by the gain, and output band rows through the sensitivity
/// matrix. Throws ParameterError when alpha is outside (0, 1].
QpProblem build_projection_qp(const CompositeGradient& grad, const SensitivityMatrix& sens,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& y,
                              const ConstraintSpec& limits, double alpha,
                              const Eigen::MatrixXd& G);

struct ProjectionResult {
    QpSolution solution;
    bool softened = false; // output rows relaxed by a penalized slack
};

/// Solve the projection QP; on an infeasible constraint set, retry with the
/// output rows softened by one shared slack variable penalized quadratically
/// in the objective.
ProjectionResult solve_projection(const QpProblem& problem);

} // namespace ofo
