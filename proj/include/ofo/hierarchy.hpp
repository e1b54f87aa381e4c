#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ofo/controller.hpp"
#include "ofo/network.hpp"
#include "ofo/powerflow.hpp"

namespace ofo {

struct Flexibility {
    double p_min = 0.0, p_max = 0.0;
    double q_min = 0.0, q_max = 0.0;
};

/// One grid layer: its plant, its controller, and the coupling bookkeeping.
/// A child is visible to its parent only as one (p, q) interface actuator;
/// everything else crosses the boundary as InterfaceMessages.
struct LayerNode {
    Network network;
    ControllerConfig config;
    ControllerState state;
    MonitorSet monitors;

    std::optional<int> parent;
    struct ChildLink {
        int node;     // index into LayerTree::nodes
        int actuator; // interface actuator index in this layer's network
    };
    std::vector<ChildLink> children;

    // realized child injections (parent side, injection convention), updated
    // from measurement messages; consumed by the next plant solve
    std::vector<std::pair<double, double>> realized;

    std::optional<PowerFlowSolution> last_solution; // warm start + measurement source
    std::optional<SensitivityMatrix> frozen_sensitivities;
};

struct InterfaceMessage {
    enum class Direction { setpoint_down, measurement_up };
    Direction direction;
    int from_node = 0;
    int to_node = 0;
    double p = 0.0; // import at the child PCC, pu
    double q = 0.0;
    int tick = 0;
};

struct LayerTree {
    std::vector<LayerNode> nodes;
    int root = 0;
    std::vector<InterfaceMessage> log;
};

/// Box of power exchange the child can offer its parent, in the parent-side
/// injection convention: element-wise sum of the child's actuator boxes
/// shifted by the uncontrolled baseline exchange (child solved with all
/// actuators at zero).
Flexibility aggregate_child_flexibility(const LayerNode& child);

struct ChildSpec {
    Network network;
    int coupling_bus = 0; // bus id in the parent network
    std::string label;
};

/// Assemble a tree with `root` on top and one layer of children, wiring each
/// child in as an interface actuator bounded by its aggregated flexibility.
/// Child controllers track the setpoints later received from the root; they
/// start at their own measured exchange so the initial state is stationary.
LayerTree build_layer_tree(const Network& root, const ControllerConfig& root_config,
                           std::vector<ChildSpec> children,
                           const ControllerConfig& child_config_template);

struct TickResult {
    bool failed = false;             // a plant diverged; records are partial
    std::vector<StepRecord> records; // per node
    std::vector<Eigen::VectorXd> measurements;
    std::vector<Eigen::VectorXd> inputs; // u_k of each node before the step
};

/// One synchronous OFO iteration across all layers: solve every plant,
/// deliver measurements upward, step every controller, deliver the updated
/// setpoints downward for tick k+1. With with_step = false only the plant
/// solves and upward measurements run (terminal observation).
TickResult hierarchy_tick(LayerTree& tree, int k,
                          const std::function<void(int, Eigen::VectorXd&)>& measure_hook = {},
                          bool with_step = true);

} // namespace ofo
