#pragma once

#include <Eigen/Dense>

#include "ofo/monitor.hpp"
#include "ofo/network.hpp"

namespace ofo {

/// Gradient of the cost split by argument: d/du and d/dy.
struct CompositeGradient {
    Eigen::VectorXd du;
    Eigen::VectorXd dy;
};

/// Cost function of a controller. `congestion` penalizes active-power
/// deviation from schedule and reactive-power usage; `tracking` penalizes the
/// squared distance of the PCC exchange from its reference.
struct ObjectiveSpec {
    enum class Kind { congestion, tracking };
    Kind kind = Kind::congestion;

    // congestion weights over the actuator p and q sub-vectors
    Eigen::MatrixXd A, B;
    Eigen::VectorXd p_nominal;

    // tracking reference at the PCC, pu
    double p_set = 0.0;
    double q_set = 0.0;

    static ObjectiveSpec congestion(const Network& network, double q_weight = 0.1);
    static ObjectiveSpec tracking(double p_set, double q_set);

    /// Throws ParameterError when a weight matrix is not symmetric PSD.
    void validate() const;
};

double objective_value(const ObjectiveSpec& objective, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& y, const MonitorSet& monitors);

CompositeGradient evaluate_gradient(const ObjectiveSpec& objective, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& y, const MonitorSet& monitors);

} // namespace ofo
