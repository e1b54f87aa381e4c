#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofo/controller.hpp"
#include "ofo/hierarchy.hpp"
#include "ofo/network.hpp"

namespace ofo {

// Monitored outputs further than this outside their band count as violations.
// The closed loop drives true outputs back to the band up to the quadratic
// linearization remainder of a single step, so the tolerance sits well above
// solver precision but far below any operational significance.
inline constexpr double kViolationTolerance = 1e-5;

inline constexpr double kSettleRelativeEps = 0.01;
inline constexpr int kSettleHold = 5;

struct Event {
    enum class Kind { actuator_disconnect, load_step, setpoint_change };
    int at_iteration = 0;
    Kind kind = Kind::actuator_disconnect;
    std::string target;  // actuator label for disconnect
    double factor = 1.0; // load_step: scale on uncontrolled injections
    double p = 0.0;      // setpoint_change payload, pu (import at the PCC)
    double q = 0.0;
};

struct HierarchyFixture {
    Network root;
    struct Child {
        Network network;
        int coupling_bus = 0;
        std::string label;
    };
    std::vector<Child> children;
};

struct Scenario {
    std::string name = "scenario";
    enum class Kind { congestion, tracking };
    Kind kind = Kind::congestion;

    std::optional<Network> network;          // single-layer plant
    std::optional<HierarchyFixture> hierarchy;

    double alpha = 0.8;
    double beta = 1.0;
    bool momentum_enabled = true;
    SensitivityPolicy sensitivity_policy = SensitivityPolicy::recompute_each_step;
    int max_iterations = 300;
    double load_scale = 1.0; // applied to uncontrolled injections before k = 0
    double p_set = 0.0;      // tracking reference at the root PCC, pu
    double q_set = 0.0;
    std::vector<Event> events;
    double noise_std = 0.0;  // Gaussian noise on measurements, pu; 0 disables
    unsigned long long seed = 0;

    void validate() const;
};

struct TrajectoryRow {
    int k = 0;
    Eigen::VectorXd u;
    Eigen::VectorXd y;
    double phi = 0.0;
    double sigma_norm = 0.0;
    QpStatus qp_status = QpStatus::optimal;
    bool softened = false;
    bool has_step = true; // false on the terminal measurement row
    int violation_count = 0;
    std::optional<std::pair<double, double>> pcc;
    std::vector<int> active_set;
};

struct Trajectory {
    std::vector<TrajectoryRow> rows; // root layer
    std::vector<std::vector<TrajectoryRow>> child_rows;
    std::vector<InterfaceMessage> messages;
    bool diverged = false;

    // column metadata for export
    std::vector<std::string> u_labels;
    std::vector<std::string> vm_labels;
    std::vector<int> vm_rows; // indices into y
    std::optional<int> pcc_p_row, pcc_q_row;
};

/// Closed-loop simulation: solve the plant, measure (plus optional noise),
/// step the controller (or the whole cascade), apply events at their
/// iterations. A diverging plant truncates the trajectory and flags it.
Trajectory run_scenario(const Scenario& scenario);

/// First iteration from which the PCC exchange stays within eps of the
/// reference for `hold` consecutive recorded rows; absent when it never does.
std::optional<int> detect_settled(const Trajectory& trajectory, double p_set, double q_set,
                                  double eps, int hold);

/// Settle detection with the default ball (1% of the reference magnitude)
/// and hold window.
std::optional<int> detect_settled(const Trajectory& trajectory, const Scenario& scenario);

/// Built-in congestion-management study: engineered voltage violation on the
/// MV fixture, generation disconnection at k = 24.
Scenario case1_scenario(double alpha = 0.8, double beta = 0.9);

/// Built-in interface-tracking study: MV fixture with two LV sub-layers,
/// reference exchange (10 MW, 3 MVAr) at the HV-MV transformer.
Scenario case2_scenario(double alpha = 0.05, double beta = 0.7);

} // namespace ofo
