#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ofo/network.hpp"
#include "ofo/powerflow.hpp"

namespace ofo {

/// One monitored plant output: a bus voltage magnitude, a branch sending-end
/// apparent power, or one component of the PCC exchange.
struct MonitoredOutput {
    enum class Kind { bus_vm, branch_flow, pcc_p, pcc_q };
    Kind kind;
    int index = 0; // bus index for bus_vm, branch index otherwise
};

/// Ordered list of measured outputs together with their operating bands.
/// The standard set is every non-slack voltage magnitude, every branch with a
/// declared rating, and the PCC exchange when the network marks one.
struct MonitorSet {
    std::vector<MonitoredOutput> outputs;
    std::optional<int> pcc_p_row;
    std::optional<int> pcc_q_row;

    static MonitorSet standard(const Network& network);

    int size() const { return static_cast<int>(outputs.size()); }

    Eigen::VectorXd measure(const PowerFlowSolution& sol) const;

    /// Operating bands per output; +/-infinity where a side is unconstrained.
    Eigen::VectorXd lower_bounds(const Network& network) const;
    Eigen::VectorXd upper_bounds(const Network& network) const;

    std::vector<std::string> labels(const Network& network) const;
};

} // namespace ofo
