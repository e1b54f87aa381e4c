#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ofo/objective.hpp"
#include "ofo/projection.hpp"

namespace ofo {

enum class SensitivityPolicy { recompute_each_step, frozen };

struct ControllerConfig {
    double alpha = 0.1;           // gain in (0, 1]
    double beta = 1.0;            // momentum weight in (0, 1]
    bool momentum_enabled = true; // disabled: plain projected gradient path
    Eigen::MatrixXd G;            // projection metric
    ObjectiveSpec objective;
    ConstraintSpec limits;
    SensitivityPolicy sensitivity_policy = SensitivityPolicy::recompute_each_step;

    void validate(Eigen::Index n_inputs) const;
};

struct ControllerState {
    Eigen::VectorXd u;                            // current inputs, (p, q) per actuator
    std::optional<CompositeGradient> prev_gradient; // raw gradient of step k-1
    int k = 0;
};

struct StepRecord {
    Eigen::VectorXd sigma;      // projected direction
    double phi = 0.0;           // cost at the measured point
    std::vector<int> active_set;
    QpStatus qp_status = QpStatus::optimal;
    bool softened = false;
    double kkt_residual = 0.0;
};

/// Convex combination beta*current + (1-beta)*previous of the cost gradients.
/// With beta == 1 or no previous gradient the current gradient is returned
/// unchanged. Throws ParameterError when beta is outside (0, 1].
CompositeGradient momentum_combine(const CompositeGradient& current,
                                   const std::optional<CompositeGradient>& previous,
                                   double beta);

/// One OFO iteration: evaluate the gradient at (u_k, y_k), blend with the
/// previous gradient, project through the constraint QP, and apply
/// u_{k+1} = u_k + alpha*sigma. The returned state stores the raw current
/// gradient for the next momentum blend.
std::pair<ControllerState, StepRecord> controller_step(const ControllerState& state,
                                                       const Eigen::VectorXd& y,
                                                       const SensitivityMatrix& sens,
                                                       const ControllerConfig& config,
                                                       const MonitorSet& monitors);

} // namespace ofo
