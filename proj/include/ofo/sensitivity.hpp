#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ofo/monitor.hpp"
#include "ofo/network.hpp"
#include "ofo/powerflow.hpp"

namespace ofo {

/// Linear map from actuator inputs to monitored outputs, extracted from the
/// converged power-flow Jacobian. Rows follow the MonitorSet order, columns
/// are (p, q) per actuator in actuator order.
struct SensitivityMatrix {
    Eigen::MatrixXd m;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;

    int rows() const { return static_cast<int>(m.rows()); }
    int cols() const { return static_cast<int>(m.cols()); }
};

/// Differentiates the monitored outputs through the power-flow equations by
/// solving one linear system per input column against the converged Jacobian.
/// Throws IllConditionedError near voltage collapse (numerically singular
/// Jacobian).
SensitivityMatrix compute_sensitivities(const Network& network, const PowerFlowSolution& sol,
                                        const MonitorSet& monitors);

} // namespace ofo
