#include "ofo/scenario.hpp"

#include <cmath>
#include <random>

#include "ofo/errors.hpp"
#include "ofo/fixtures.hpp"

namespace ofo {

void Scenario::validate() const {
    if (max_iterations < 1) throw ParameterError("max_iterations must be at least 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in (0, 1]");
    if (noise_std < 0.0) throw ParameterError("noise_std must be non-negative");
    if (!network && !hierarchy) throw ParameterError("scenario has no plant");
    for (const Event& e : events)
        if (e.at_iteration < 0 || e.at_iteration >= max_iterations)
            throw ParameterError("event scheduled outside the run horizon");
}

namespace {

// Deterministic Gaussian source; Box-Muller over a fixed-width generator so
// trajectories replay identically for one seed.
class NoiseSource {
public:
    NoiseSource(unsigned long long seed, double std_dev)
        : engine_(seed ^ 0x9e3779b97f4a7c15ULL), std_(std_dev) {}

    void apply(Eigen::VectorXd& y) {
        if (std_ <= 0.0) return;
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += std_ * gaussian();
    }

private:
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double std_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

int count_violations(const Eigen::VectorXd& y, const ConstraintSpec& limits) {
    int count = 0;
    for (Eigen::Index r = 0; r < y.size(); ++r) {
        if (y(r) > limits.y_max(r) + kViolationTolerance) ++count;
        else if (y(r) < limits.y_min(r) - kViolationTolerance) ++count;
    }
    return count;
}

void fill_column_metadata(Trajectory& traj, const Network& network, const MonitorSet& monitors) {
    for (const Actuator& a : network.actuators) {
        traj.u_labels.push_back("p_" + a.label);
        traj.u_labels.push_back("q_" + a.label);
    }
    for (int r = 0; r < monitors.size(); ++r) {
        if (monitors.outputs[r].kind == MonitoredOutput::Kind::bus_vm) {
            traj.vm_rows.push_back(r);
            traj.vm_labels.push_back("vm_" +
                                     std::to_string(network.buses[monitors.outputs[r].index].id));
        }
    }
    traj.pcc_p_row = monitors.pcc_p_row;
    traj.pcc_q_row = monitors.pcc_q_row;
}

// Disconnection: the unit's injection drops to zero and its box collapses so
// the controller can no longer schedule it.
void disconnect_actuator(Network& network, const std::string& label, ControllerConfig& config,
                         Eigen::VectorXd& u) {
    for (std::size_t a = 0; a < network.actuators.size(); ++a) {
        Actuator& act = network.actuators[a];
        if (act.label != label) continue;
        act.p_min = act.p_max = 0.0;
        act.q_min = act.q_max = 0.0;
        act.p_nominal = 0.0;
        u(2 * a) = 0.0;
        u(2 * a + 1) = 0.0;
        config.limits.u_min(2 * a) = 0.0;
        config.limits.u_max(2 * a) = 0.0;
        config.limits.u_min(2 * a + 1) = 0.0;
        config.limits.u_max(2 * a + 1) = 0.0;
        if (config.objective.kind == ObjectiveSpec::Kind::congestion)
            config.objective.p_nominal(a) = 0.0;
        return;
    }
    throw ParameterError("no actuator labeled '" + label + "' to disconnect");
}

void scale_injections(Network& network, double factor) {
    for (Complex& s : network.injections) s *= factor;
}

double input_capacity(const ConstraintSpec& limits) {
    double cap = 1.0;
    for (Eigen::Index i = 0; i < limits.u_min.size(); ++i) {
        if (std::isfinite(limits.u_min(i))) cap = std::max(cap, std::abs(limits.u_min(i)));
        if (std::isfinite(limits.u_max(i))) cap = std::max(cap, std::abs(limits.u_max(i)));
    }
    return cap;
}

Trajectory run_single_layer(const Scenario& scenario) {
    Network network = *scenario.network;
    scale_injections(network, scenario.load_scale);

    MonitorSet monitors = MonitorSet::standard(network);
    ControllerConfig config;
    config.alpha = scenario.alpha;
    config.beta = scenario.beta;
    config.momentum_enabled = scenario.momentum_enabled;
    config.sensitivity_policy = scenario.sensitivity_policy;
    config.objective = (scenario.kind == Scenario::Kind::tracking)
                           ? ObjectiveSpec::tracking(scenario.p_set, scenario.q_set)
                           : ObjectiveSpec::congestion(network);
    config.limits = ConstraintSpec::from_network(network, monitors);
    const Eigen::Index m = 2 * static_cast<Eigen::Index>(network.actuators.size());
    config.G = Eigen::MatrixXd::Identity(m, m);

    ControllerState state;
    state.u = nominal_inputs(network);

    Trajectory traj;
    fill_column_metadata(traj, network, monitors);

    NoiseSource noise(scenario.seed, scenario.noise_std);
    std::optional<PowerFlowSolution> warm;
    std::optional<SensitivityMatrix> frozen;
    const double capacity = input_capacity(config.limits);

    for (int k = 0; k <= scenario.max_iterations; ++k) {
        for (const Event& e : scenario.events) {
            if (e.at_iteration != k || k == scenario.max_iterations) continue;
            switch (e.kind) {
                case Event::Kind::actuator_disconnect:
                    disconnect_actuator(network, e.target, config, state.u);
                    break;
                case Event::Kind::load_step: scale_injections(network, e.factor); break;
                case Event::Kind::setpoint_change:
                    config.objective.p_set = e.p;
                    config.objective.q_set = e.q;
                    break;
            }
        }

        PowerFlowSolution sol;
        try {
            sol = solve_power_flow(network, state.u, {}, warm ? &warm->v : nullptr);
        } catch (const PlantDivergedError&) {
            traj.diverged = true;
            break;
        }
        warm = sol;

        Eigen::VectorXd y = monitors.measure(sol);
        noise.apply(y);

        TrajectoryRow row;
        row.k = k;
        row.u = state.u;
        row.y = y;
        row.phi = objective_value(config.objective, state.u, y, monitors);
        row.violation_count = count_violations(y, config.limits);
        row.pcc = sol.pcc_flow;

        if (k == scenario.max_iterations) {
            row.has_step = false;
            traj.rows.push_back(std::move(row));
            break;
        }

        const SensitivityMatrix* sens = nullptr;
        SensitivityMatrix fresh;
        if (scenario.sensitivity_policy == SensitivityPolicy::frozen) {
            if (!frozen) frozen = compute_sensitivities(network, sol, monitors);
            sens = &*frozen;
        } else {
            fresh = compute_sensitivities(network, sol, monitors);
            sens = &fresh;
        }

        auto [next, record] = controller_step(state, y, *sens, config, monitors);
        row.sigma_norm = record.sigma.norm();
        row.qp_status = record.qp_status;
        row.softened = record.softened;
        row.active_set = record.active_set;
        traj.rows.push_back(std::move(row));
        state = std::move(next);

        if (state.u.lpNorm<Eigen::Infinity>() > 1e3 * capacity) {
            traj.diverged = true;
            break;
        }
    }
    return traj;
}

Trajectory run_hierarchy(const Scenario& scenario) {
    const HierarchyFixture& fix = *scenario.hierarchy;

    ControllerConfig root_config;
    root_config.alpha = scenario.alpha;
    root_config.beta = scenario.beta;
    root_config.momentum_enabled = scenario.momentum_enabled;
    root_config.sensitivity_policy = scenario.sensitivity_policy;
    root_config.objective = ObjectiveSpec::tracking(scenario.p_set, scenario.q_set);

    ControllerConfig child_template = root_config;

    std::vector<ChildSpec> children;
    for (const auto& c : fix.children) children.push_back({c.network, c.coupling_bus, c.label});

    LayerTree tree = build_layer_tree(fix.root, root_config, std::move(children), child_template);
    const int n_nodes = static_cast<int>(tree.nodes.size());

    Trajectory traj;
    fill_column_metadata(traj, tree.nodes[0].network, tree.nodes[0].monitors);
    traj.child_rows.resize(n_nodes - 1);

    NoiseSource noise(scenario.seed, scenario.noise_std);
    auto hook = [&](int /*node*/, Eigen::VectorXd& y) { noise.apply(y); };

    const double capacity = input_capacity(tree.nodes[0].config.limits);

    for (int k = 0; k <= scenario.max_iterations; ++k) {
        for (const Event& e : scenario.events) {
            if (e.at_iteration != k || k == scenario.max_iterations) continue;
            switch (e.kind) {
                case Event::Kind::actuator_disconnect: {
                    bool done = false;
                    for (LayerNode& node : tree.nodes) {
                        for (const Actuator& a : node.network.actuators)
                            if (a.label == e.target) {
                                disconnect_actuator(node.network, e.target, node.config,
                                                    node.state.u);
                                done = true;
                                break;
                            }
                        if (done) break;
                    }
                    if (!done)
                        throw ParameterError("no actuator labeled '" + e.target +
                                             "' in any layer");
                    break;
                }
                case Event::Kind::load_step:
                    for (LayerNode& node : tree.nodes) scale_injections(node.network, e.factor);
                    break;
                case Event::Kind::setpoint_change:
                    tree.nodes[tree.root].config.objective.p_set = e.p;
                    tree.nodes[tree.root].config.objective.q_set = e.q;
                    break;
            }
        }

        const bool last = (k == scenario.max_iterations);
        TickResult tick = hierarchy_tick(tree, k, hook, !last);
        if (tick.failed) {
            traj.diverged = true;
            break;
        }

        for (int i = 0; i < n_nodes; ++i) {
            const LayerNode& node = tree.nodes[i];
            TrajectoryRow row;
            row.k = k;
            row.u = last ? node.state.u : tick.inputs[i];
            row.y = tick.measurements[i];
            row.violation_count = count_violations(row.y, node.config.limits);
            row.pcc = node.last_solution->pcc_flow;
            if (!last) {
                const StepRecord& rec = tick.records[i];
                row.phi = rec.phi;
                row.sigma_norm = rec.sigma.norm();
                row.qp_status = rec.qp_status;
                row.softened = rec.softened;
                row.active_set = rec.active_set;
            } else {
                row.has_step = false;
                row.phi =
                    objective_value(node.config.objective, row.u, row.y, node.monitors);
            }
            if (i == tree.root) traj.rows.push_back(std::move(row));
            else traj.child_rows[i - 1].push_back(std::move(row));
        }

        if (tree.nodes[tree.root].state.u.lpNorm<Eigen::Infinity>() > 1e3 * capacity) {
            traj.diverged = true;
            break;
        }
    }

    traj.messages = tree.log;
    return traj;
}

} // namespace

Trajectory run_scenario(const Scenario& scenario) {
    scenario.validate();
    if (scenario.hierarchy) return run_hierarchy(scenario);
    return run_single_layer(scenario);
}

std::optional<int> detect_settled(const Trajectory& trajectory, double p_set, double q_set,
                                  double eps, int hold) {
    if (hold < 1) throw ParameterError("hold window must be at least 1");
    int streak = 0;
    for (const TrajectoryRow& row : trajectory.rows) {
        if (!row.pcc) return std::nullopt;
        const double dist = std::hypot(row.pcc->first - p_set, row.pcc->second - q_set);
        streak = (dist <= eps) ? streak + 1 : 0;
        if (streak >= hold) return row.k - hold + 1;
    }
    return std::nullopt;
}

std::optional<int> detect_settled(const Trajectory& trajectory, const Scenario& scenario) {
    const double eps = kSettleRelativeEps * std::hypot(scenario.p_set, scenario.q_set);
    return detect_settled(trajectory, scenario.p_set, scenario.q_set, eps, kSettleHold);
}

Scenario case1_scenario(double alpha, double beta) {
    Scenario s;
    s.name = "case1_congestion";
    s.kind = Scenario::Kind::congestion;
    s.network = cigre_mv_fixture();
    s.alpha = alpha;
    s.beta = beta;
    s.max_iterations = 60;
    s.load_scale = 1.45; // pushes the feeder tail below the 0.95 band at k = 0

    Event e;
    e.at_iteration = 24;
    e.kind = Event::Kind::actuator_disconnect;
    e.target = "wpp";
    s.events.push_back(e);
    return s;
}

Scenario case2_scenario(double alpha, double beta) {
    Scenario s;
    s.name = "case2_dispatch";
    s.kind = Scenario::Kind::tracking;
    s.alpha = alpha;
    s.beta = beta;
    s.max_iterations = 300;
    s.p_set = 10.0; // pu == MW on the 1 MVA base
    s.q_set = 3.0;

    HierarchyFixture fix;
    fix.root = cigre_mv_fixture();
    fix.children.push_back({lv_feeder_fixture(1), 5, "lv_grid_1"});
    fix.children.push_back({lv_feeder_fixture(2), 8, "lv_grid_2"});
    s.hierarchy = std::move(fix);
    return s;
}

} // namespace ofo
