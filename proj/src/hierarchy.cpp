#include "ofo/hierarchy.hpp"

#include <algorithm>
#include <cmath>

#include "ofo/errors.hpp"

namespace ofo {

Flexibility aggregate_child_flexibility(const LayerNode& child) {
    if (!child.network.pcc_branch)
        throw ParameterError("child network has no PCC branch");

    // uncontrolled baseline: the exchange with every actuator switched off
    const Eigen::VectorXd u_off =
        Eigen::VectorXd::Zero(2 * child.network.actuators.size());
    const PowerFlowSolution base = solve_power_flow(child.network, u_off);
    const double base_p = -base.pcc_flow->first;  // injection convention
    const double base_q = -base.pcc_flow->second;

    Flexibility flex;
    flex.p_min = base_p;
    flex.p_max = base_p;
    flex.q_min = base_q;
    flex.q_max = base_q;
    for (const Actuator& a : child.network.actuators) {
        flex.p_min += a.p_min;
        flex.p_max += a.p_max;
        flex.q_min += a.q_min;
        flex.q_max += a.q_max;
    }
    return flex;
}

LayerTree build_layer_tree(const Network& root, const ControllerConfig& root_config,
                           std::vector<ChildSpec> children,
                           const ControllerConfig& child_config_template) {
    LayerTree tree;
    tree.root = 0;

    LayerNode root_node;
    root_node.network = root;
    root_node.config = root_config;

    std::vector<LayerNode> child_nodes;
    for (std::size_t c = 0; c < children.size(); ++c) {
        ChildSpec& spec = children[c];
        LayerNode child;
        child.network = std::move(spec.network);
        child.config = child_config_template;
        child.parent = 0;
        child.monitors = MonitorSet::standard(child.network);
        child.state.u = nominal_inputs(child.network);

        const Flexibility flex = aggregate_child_flexibility(child);

        // measured exchange at the child's own schedule; the parent starts
        // from this point so the cascade is initially stationary
        const PowerFlowSolution at_nominal = solve_power_flow(child.network, child.state.u);
        const double inj_p = std::clamp(-at_nominal.pcc_flow->first, flex.p_min, flex.p_max);
        const double inj_q = std::clamp(-at_nominal.pcc_flow->second, flex.q_min, flex.q_max);

        child.config.objective =
            ObjectiveSpec::tracking(at_nominal.pcc_flow->first, at_nominal.pcc_flow->second);
        child.config.limits = ConstraintSpec::from_network(child.network, child.monitors);
        child.config.G =
            Eigen::MatrixXd::Identity(child.state.u.size(), child.state.u.size());

        Actuator iface;
        iface.bus = spec.coupling_bus;
        iface.label = spec.label.empty() ? ("child_" + std::to_string(c)) : spec.label;
        iface.p_min = flex.p_min;
        iface.p_max = flex.p_max;
        iface.q_min = flex.q_min;
        iface.q_max = flex.q_max;
        iface.p_nominal = inj_p;
        root_node.network.actuators.push_back(iface);

        root_node.children.push_back(
            {static_cast<int>(c) + 1, static_cast<int>(root_node.network.actuators.size()) - 1});
        root_node.realized.emplace_back(inj_p, inj_q);
        child_nodes.push_back(std::move(child));
    }

    root_node.network.validate();
    root_node.monitors = MonitorSet::standard(root_node.network);
    root_node.state.u = nominal_inputs(root_node.network);
    for (std::size_t c = 0; c < root_node.children.size(); ++c) {
        const int a = root_node.children[c].actuator;
        root_node.state.u(2 * a) = root_node.realized[c].first;
        root_node.state.u(2 * a + 1) = root_node.realized[c].second;
    }
    root_node.config.limits = ConstraintSpec::from_network(root_node.network, root_node.monitors);
    if (root_node.config.G.rows() != root_node.state.u.size())
        root_node.config.G =
            Eigen::MatrixXd::Identity(root_node.state.u.size(), root_node.state.u.size());

    tree.nodes.push_back(std::move(root_node));
    for (auto& child : child_nodes) tree.nodes.push_back(std::move(child));
    return tree;
}

TickResult hierarchy_tick(LayerTree& tree, int k,
                          const std::function<void(int, Eigen::VectorXd&)>& measure_hook,
                          bool with_step) {
    const int n_nodes = static_cast<int>(tree.nodes.size());
    TickResult result;
    result.records.resize(n_nodes);
    result.measurements.resize(n_nodes);
    result.inputs.resize(n_nodes);

    // (1) every layer solves its own plant at the current inputs, with child
    // couplings at their last reported exchange
    for (int i = 0; i < n_nodes; ++i) {
        LayerNode& node = tree.nodes[i];
        Eigen::VectorXd u_plant = node.state.u;
        for (std::size_t c = 0; c < node.children.size(); ++c) {
            const int a = node.children[c].actuator;
            u_plant(2 * a) = node.realized[c].first;
            u_plant(2 * a + 1) = node.realized[c].second;
        }
        try {
            const Eigen::VectorXcd* warm =
                node.last_solution ? &node.last_solution->v : nullptr;
            node.last_solution = solve_power_flow(node.network, u_plant, {}, warm);
        } catch (const PlantDivergedError&) {
            result.failed = true;
            return result;
        }
        result.inputs[i] = node.state.u;
    }

    // (2) PCC measurements travel up
    for (int i = 0; i < n_nodes; ++i) {
        LayerNode& node = tree.nodes[i];
        if (!node.parent) continue;
        const auto [p_imp, q_imp] = *node.last_solution->pcc_flow;
        tree.log.push_back({InterfaceMessage::Direction::measurement_up, i, *node.parent,
                            p_imp, q_imp, k});
        LayerNode& parent = tree.nodes[*node.parent];
        for (std::size_t c = 0; c < parent.children.size(); ++c)
            if (parent.children[c].node == i)
                parent.realized[c] = {-p_imp, -q_imp};
    }

    // (3) every controller executes one step on its own measurements
    for (int i = 0; i < n_nodes; ++i) {
        LayerNode& node = tree.nodes[i];
        Eigen::VectorXd y = node.monitors.measure(*node.last_solution);
        if (measure_hook) measure_hook(i, y);
        result.measurements[i] = y;
        if (!with_step) continue;

        const SensitivityMatrix* sens = nullptr;
        SensitivityMatrix fresh;
        if (node.config.sensitivity_policy == SensitivityPolicy::frozen) {
            if (!node.frozen_sensitivities)
                node.frozen_sensitivities =
                    compute_sensitivities(node.network, *node.last_solution, node.monitors);
            sens = &*node.frozen_sensitivities;
        } else {
            fresh = compute_sensitivities(node.network, *node.last_solution, node.monitors);
            sens = &fresh;
        }

        auto [next, record] = controller_step(node.state, y, *sens, node.config, node.monitors);
        node.state = std::move(next);
        result.records[i] = std::move(record);
    }

    if (!with_step) return result;

    // (4)+(5) updated child-PCC inputs become the children's references for
    // the next tick
    for (int i = 0; i < n_nodes; ++i) {
        LayerNode& node = tree.nodes[i];
        for (const auto& link : node.children) {
            const double p_set = -node.state.u(2 * link.actuator);
            const double q_set = -node.state.u(2 * link.actuator + 1);
            tree.log.push_back({InterfaceMessage::Direction::setpoint_down, i, link.node,
                                p_set, q_set, k});
            tree.nodes[link.node].config.objective.p_set = p_set;
            tree.nodes[link.node].config.objective.q_set = q_set;
        }
    }

    return result;
}

} // namespace ofo
