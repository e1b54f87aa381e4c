#include "ofo/network.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ofo/errors.hpp"

namespace ofo {

int Network::bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    throw DegenerateNetworkError("unknown bus id " + std::to_string(id));
}

int Network::slack_index() const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].kind == BusKind::slack) return static_cast<int>(i);
    throw DegenerateNetworkError("network has no slack bus");
}

void Network::validate() const {
    if (buses.empty()) throw DegenerateNetworkError("network has no buses");
    if (injections.size() != buses.size())
        throw DegenerateNetworkError("injection list length does not match bus count");
    if (base_mva <= 0.0) throw DegenerateNetworkError("base power must be positive");

    int slack_count = 0;
    for (const Bus& b : buses) {
        if (b.kind == BusKind::slack) ++slack_count;
        if (!(b.v_min < b.v_nominal && b.v_nominal < b.v_max))
            throw DegenerateNetworkError("bus " + std::to_string(b.id) +
                                         " voltage band does not bracket nominal");
    }
    if (slack_count != 1)
        throw DegenerateNetworkError("expected exactly one slack bus, found " +
                                     std::to_string(slack_count));

    // duplicate ids break the id -> index mapping
    for (std::size_t i = 0; i < buses.size(); ++i)
        for (std::size_t j = i + 1; j < buses.size(); ++j)
            if (buses[i].id == buses[j].id)
                throw DegenerateNetworkError("duplicate bus id " + std::to_string(buses[i].id));

    if (branches.empty() && buses.size() > 1)
        throw DegenerateNetworkError("multi-bus network with no branches");

    for (const Branch& br : branches) {
        if (std::abs(br.z) <= 0.0)
            throw DegenerateNetworkError("branch with zero series impedance between buses " +
                                         std::to_string(br.from_bus) + " and " +
                                         std::to_string(br.to_bus));
        if (br.from_bus == br.to_bus)
            throw DegenerateNetworkError("branch endpoints coincide at bus " +
                                         std::to_string(br.from_bus));
        if (br.tap <= 0.0)
            throw DegenerateNetworkError("non-positive tap ratio");
        bus_index(br.from_bus);
        bus_index(br.to_bus);
    }

    if (pcc_branch) {
        if (*pcc_branch < 0 || *pcc_branch >= static_cast<int>(branches.size()))
            throw DegenerateNetworkError("pcc_branch index out of range");
    }

    const int slack = slack_index();
    for (const Actuator& a : actuators) {
        const int bi = bus_index(a.bus);
        if (bi == slack)
            throw DegenerateNetworkError("actuator '" + a.label + "' placed on the slack bus");
        if (!(a.p_min <= a.p_nominal && a.p_nominal <= a.p_max))
            throw DegenerateNetworkError("actuator '" + a.label + "' nominal outside its box");
        if (a.q_min > a.q_max)
            throw DegenerateNetworkError("actuator '" + a.label + "' has q_min > q_max");
    }

    // connectivity over all buses
    const std::size_t n = buses.size();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const Branch& br : branches) {
            const int f = bus_index(br.from_bus), t = bus_index(br.to_bus);
            int other = -1;
            if (f == v) other = t;
            else if (t == v) other = f;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n))
        throw DegenerateNetworkError("network graph is not connected");
}

Eigen::MatrixXcd build_admittance(const Network& network) {
    const int n = static_cast<int>(network.buses.size());
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);

    for (const Branch& br : network.branches) {
        if (std::abs(br.z) <= 0.0)
            throw DegenerateNetworkError("zero-impedance branch in admittance assembly");
        const int f = network.bus_index(br.from_bus);
        const int t = network.bus_index(br.to_bus);
        const Complex ys = 1.0 / br.z;
        const Complex ysh{0.0, br.b_charging / 2.0};
        const double tap = br.tap;

        y(f, f) += (ys + ysh) / (tap * tap);
        y(t, t) += ys + ysh;
        y(f, t) -= ys / tap;
        y(t, f) -= ys / tap;
    }
    for (int i = 0; i < n; ++i) y(i, i) += network.buses[i].shunt;
    return y;
}

Eigen::VectorXcd bus_injections(const Network& network, const Eigen::VectorXd& u) {
    const int n = static_cast<int>(network.buses.size());
    if (u.size() != 2 * static_cast<Eigen::Index>(network.actuators.size()))
        throw ParameterError("input vector length does not match actuator count");

    Eigen::VectorXcd s(n);
    for (int i = 0; i < n; ++i) s(i) = network.injections[i];
    for (std::size_t a = 0; a < network.actuators.size(); ++a) {
        const int bi = network.bus_index(network.actuators[a].bus);
        s(bi) += Complex(u(2 * a), u(2 * a + 1));
    }
    return s;
}

Eigen::VectorXd nominal_inputs(const Network& network) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * network.actuators.size());
    for (std::size_t a = 0; a < network.actuators.size(); ++a)
        u(2 * a) = network.actuators[a].p_nominal;
    return u;
}

void input_bounds(const Network& network, Eigen::VectorXd& u_min, Eigen::VectorXd& u_max) {
    const auto m = static_cast<Eigen::Index>(2 * network.actuators.size());
    u_min.resize(m);
    u_max.resize(m);
    for (std::size_t a = 0; a < network.actuators.size(); ++a) {
        const Actuator& act = network.actuators[a];
        u_min(2 * a) = act.p_min;
        u_max(2 * a) = act.p_max;
        u_min(2 * a + 1) = act.q_min;
        u_max(2 * a + 1) = act.q_max;
    }
}

} // namespace ofo
