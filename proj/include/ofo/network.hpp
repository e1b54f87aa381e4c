#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ofo {

using Complex = std::complex<double>;

enum class BusKind { slack, pq };

struct Bus {
    int id = 0;
    BusKind kind = BusKind::pq;
    double v_nominal = 1.0;  // pu
    double v_min = 0.95;     // pu
    double v_max = 1.05;     // pu
    Complex shunt{0.0, 0.0}; // shunt admittance to ground, pu
};

struct Branch {
    int from_bus = 0;
    int to_bus = 0;
    Complex z{0.0, 0.0};      // series impedance, pu
    double b_charging = 0.0;  // total line charging susceptance, pu
    double s_max = 0.0;       // apparent-power limit, pu; 0 disables monitoring
    bool is_transformer = false;
    double tap = 1.0;         // off-nominal ratio on the from side
};

struct Actuator {
    int bus = 0;
    double p_min = 0.0, p_max = 0.0; // pu
    double q_min = 0.0, q_max = 0.0; // pu
    double p_nominal = 0.0;          // scheduled active power, pu
    std::string label;
};

/// Static plant description. Immutable once validated; all quantities per unit
/// on base_mva. Bus ids are arbitrary ints, mapped to dense indices internally.
struct Network {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Actuator> actuators;
    std::vector<Complex> injections; // uncontrolled complex power per bus (same order as buses)
    double base_mva = 1.0;
    std::optional<int> pcc_branch;   // branch index marking the upstream interface

    int bus_index(int id) const;
    int slack_index() const;

    /// Throws DegenerateNetworkError when any structural invariant fails.
    void validate() const;

    double to_pu(double mw) const { return mw / base_mva; }
    double to_mw(double pu) const { return pu * base_mva; }
};

/// Bus admittance matrix in bus order. Branch contributions use the standard
/// pi model with the tap on the from side.
Eigen::MatrixXcd build_admittance(const Network& network);

/// Per-bus complex injections for an input vector u stacked (p, q) per actuator.
Eigen::VectorXcd bus_injections(const Network& network, const Eigen::VectorXd& u);

/// Nominal input vector: each actuator at (p_nominal, 0).
Eigen::VectorXd nominal_inputs(const Network& network);

/// Stacked actuator box bounds in the same layout as the input vector.
void input_bounds(const Network& network, Eigen::VectorXd& u_min, Eigen::VectorXd& u_max);

} // namespace ofo
