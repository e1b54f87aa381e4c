#include "ofo/fixtures.hpp"

#include <cmath>

namespace ofo {

namespace {

// MV cable / overhead-line impedance per km on a 20 kV, 1 MVA base (Z_base = 400 ohm).
constexpr double kCableRPerKm = 0.342 / 400.0;
constexpr double kCableXPerKm = 0.475 / 400.0;
constexpr double kOhlRPerKm = 0.510 / 400.0;
constexpr double kOhlXPerKm = 0.366 / 400.0;

Branch mv_cable(int from, int to, double km, double s_max) {
    Branch br;
    br.from_bus = from;
    br.to_bus = to;
    br.z = Complex(kCableRPerKm * km, kCableXPerKm * km);
    br.b_charging = 0.0;
    br.s_max = s_max;
    return br;
}

Branch mv_ohl(int from, int to, double km, double s_max) {
    Branch br = mv_cable(from, to, km, s_max);
    br.z = Complex(kOhlRPerKm * km, kOhlXPerKm * km);
    return br;
}

Actuator der(int bus, const char* label, double p_nom, double p_min, double p_max,
             double q_range) {
    Actuator a;
    a.bus = bus;
    a.label = label;
    a.p_nominal = p_nom;
    a.p_min = p_min;
    a.p_max = p_max;
    a.q_min = -q_range;
    a.q_max = q_range;
    return a;
}

// Deterministic generator for the LV fixture jitter; avoids <random> so the
// fixture is identical across standard-library implementations.
struct Lcg {
    unsigned long long state;
    explicit Lcg(unsigned long long seed) : state(seed * 2862933555777941757ULL + 3037000493ULL) {}
    double uniform() { // in [0, 1)
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace

Network cigre_mv_fixture() {
    Network net;
    net.base_mva = 1.0;

    auto add_bus = [&](int id, BusKind kind) {
        Bus b;
        b.id = id;
        b.kind = kind;
        b.v_nominal = 1.0;
        if (kind == BusKind::slack) {
            b.v_min = 0.90;
            b.v_max = 1.10;
        } else {
            b.v_min = 0.95;
            b.v_max = 1.05;
        }
        net.buses.push_back(b);
    };

    add_bus(0, BusKind::slack);
    for (int id = 1; id <= 13; ++id) add_bus(id, BusKind::pq);

    // HV/MV coupling transformer, 25 MVA class. Branch 0 is the PCC.
    Branch trafo;
    trafo.from_bus = 0;
    trafo.to_bus = 1;
    trafo.z = Complex(0.0002, 0.0060);
    trafo.s_max = 30.0;
    trafo.is_transformer = true;
    net.branches.push_back(trafo);
    net.pcc_branch = 0;

    // main feeder (cable), lengths loosely following the benchmark
    net.branches.push_back(mv_cable(1, 2, 1.50, 16.0));
    net.branches.push_back(mv_cable(2, 3, 2.20, 14.0));
    net.branches.push_back(mv_cable(3, 4, 0.61, 12.0));
    net.branches.push_back(mv_cable(4, 5, 0.56, 12.0));
    net.branches.push_back(mv_cable(5, 6, 1.54, 10.0));
    net.branches.push_back(mv_cable(6, 7, 0.24, 10.0));
    net.branches.push_back(mv_cable(7, 8, 1.67, 8.0));
    net.branches.push_back(mv_cable(8, 9, 0.32, 6.0));
    net.branches.push_back(mv_cable(9, 10, 0.77, 6.0));
    net.branches.push_back(mv_cable(10, 11, 0.33, 6.0));
    // second feeder (overhead)
    net.branches.push_back(mv_ohl(1, 12, 4.89, 8.0));
    net.branches.push_back(mv_ohl(12, 13, 2.99, 6.0));

    // uncontrolled demand, 0.95-ish power factor; bus 1 lumps the
    // substation-level load that never stresses the feeders
    auto load = [](double p, double q) { return Complex(-p, -q); };
    net.injections = {
        Complex(0.0, 0.0), // slack
        load(6.00, 1.80),  // 1
        Complex(0.0, 0.0), // 2 trunk node
        load(0.50, 0.16),  // 3
        load(0.45, 0.14),  // 4
        load(0.55, 0.18),  // 5
        load(0.35, 0.11),  // 6
        load(0.30, 0.10),  // 7
        load(0.50, 0.16),  // 8
        load(0.40, 0.13),  // 9
        load(0.35, 0.11),  // 10
        load(0.30, 0.10),  // 11
        load(0.45, 0.14),  // 12
        load(0.35, 0.11),  // 13
    };

    // flexible units: storage, PV, controllable loads along the main feeder,
    // the wind plant at bus 7, and two smaller units on the second feeder
    net.actuators.push_back(der(1, "bess_1", 0.0, -1.5, 1.5, 1.0));
    net.actuators.push_back(der(2, "flex_load_2", -0.50, -0.90, -0.10, 0.30));
    net.actuators.push_back(der(3, "pv_3", 0.40, 0.0, 0.80, 0.40));
    net.actuators.push_back(der(4, "flex_load_4", -0.45, -0.80, -0.10, 0.30));
    net.actuators.push_back(der(5, "pv_5", 0.35, 0.0, 0.70, 0.35));
    net.actuators.push_back(der(6, "bess_6", 0.0, -0.60, 0.60, 0.50));
    net.actuators.push_back(der(7, "wpp", 1.50, 0.0, 1.50, 0.60));
    net.actuators.push_back(der(8, "flex_load_8", -0.50, -0.90, -0.10, 0.30));
    net.actuators.push_back(der(9, "pv_9", 0.30, 0.0, 0.60, 0.30));
    net.actuators.push_back(der(10, "bess_10", 0.0, -0.50, 0.50, 0.40));
    net.actuators.push_back(der(11, "pv_11", 0.25, 0.0, 0.50, 0.25));
    net.actuators.push_back(der(12, "flex_load_12", -0.40, -0.70, -0.10, 0.25));
    net.actuators.push_back(der(13, "pv_13", 0.20, 0.0, 0.40, 0.20));

    net.validate();
    return net;
}

Network lv_feeder_fixture(unsigned seed) {
    Lcg rng(seed + 1);
    const int n_buses = 6 + static_cast<int>(seed % 3);

    Network net;
    net.base_mva = 1.0;

    for (int id = 0; id < n_buses; ++id) {
        Bus b;
        b.id = id;
        b.kind = (id == 0) ? BusKind::slack : BusKind::pq;
        b.v_nominal = 1.0;
        b.v_min = (id == 0) ? 0.90 : 0.95;
        b.v_max = (id == 0) ? 1.10 : 1.05;
        net.buses.push_back(b);
    }

    // MV/LV transformer, 630 kVA class. Branch 0 is the PCC.
    Branch trafo;
    trafo.from_bus = 0;
    trafo.to_bus = 1;
    trafo.z = Complex(0.012, 0.048);
    trafo.s_max = 0.63;
    trafo.is_transformer = true;
    net.branches.push_back(trafo);
    net.pcc_branch = 0;

    for (int id = 2; id < n_buses; ++id) {
        Branch br;
        br.from_bus = id - 1;
        br.to_bus = id;
        const double len = rng.range(0.6, 1.4);
        br.z = Complex(0.055 * len, 0.026 * len);
        br.s_max = 0.5;
        net.branches.push_back(br);
    }
    // seed 2 carries a deliberately tight trunk section; requests beyond its
    // rating are rejected by the local controller, not the aggregation box
    if (seed == 2) net.branches[1].s_max = 0.16;

    net.injections.assign(n_buses, Complex(0.0, 0.0));
    for (int id = 1; id < n_buses; ++id) {
        const double p = rng.range(0.015, 0.045);
        net.injections[id] = Complex(-p, -0.3 * p);
    }

    const int mid = 1 + (n_buses - 1) / 2;
    const int end = n_buses - 1;
    net.actuators.push_back(der(mid, "pv", 0.06, 0.0, 0.08 + 0.04 * rng.uniform(), 0.06));
    net.actuators.push_back(der(end, "bess", 0.0, -0.12, 0.12, 0.08));
    if (seed % 2 == 0)
        net.actuators.push_back(der(std::max(1, mid - 1), "ev_fleet", -0.02, -0.08, 0.02, 0.04));

    net.validate();
    return net;
}

} // namespace ofo
