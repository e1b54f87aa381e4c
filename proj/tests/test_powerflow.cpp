#include <doctest.h>

#include <cmath>
#include <random>

#include "ofo/errors.hpp"
#include "ofo/fixtures.hpp"
#include "ofo/monitor.hpp"
#include "ofo/powerflow.hpp"
#include "ofo/sensitivity.hpp"

using namespace ofo;

namespace {

// slack -- jX line -- load bus, one actuator at the load bus
Network two_bus(double x = 0.1) {
    Network net;
    net.base_mva = 1.0;
    Bus slack;
    slack.id = 0;
    slack.kind = BusKind::slack;
    slack.v_min = 0.3;
    slack.v_max = 1.5;
    Bus load = slack;
    load.id = 1;
    load.kind = BusKind::pq;
    net.buses = {slack, load};
    Branch line;
    line.from_bus = 0;
    line.to_bus = 1;
    line.z = Complex(0.0, x);
    line.s_max = 5.0;
    net.branches = {line};
    net.pcc_branch = 0;
    net.injections = {Complex(0, 0), Complex(0, 0)};
    Actuator a;
    a.bus = 1;
    a.label = "unit";
    a.p_min = -3.0;
    a.p_max = 3.0;
    a.q_min = -3.0;
    a.q_max = 3.0;
    net.actuators = {a};
    return net;
}

// closed form for the two-bus reactive problem: injection q at the load bus
// of a lossless line x gives |v| = (1 + sqrt(1 + 4 q x)) / 2
double two_bus_voltage(double q, double x) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * q * x)); }

} // namespace

TEST_CASE("flat no-load case") {
    Network net = two_bus();
    net.actuators.clear();
    const PowerFlowSolution sol = solve_power_flow(net, Eigen::VectorXd::Zero(0));
    CHECK(std::abs(sol.v(0) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(sol.v(1) - Complex(1.0, 0.0)) < 1e-12);
    CHECK(sol.branch_s(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.iterations == 0);
}

TEST_CASE("two-bus reactive load matches the closed-form root") {
    const double x = 0.1;
    const Network net = two_bus(x);
    Eigen::VectorXd u(2);
    u << 0.0, -0.1; // reactive demand of 0.1 pu

    const PowerFlowSolution sol = solve_power_flow(net, u);
    const double expected = two_bus_voltage(-0.1, x);
    CHECK(std::abs(std::abs(sol.v(1)) - expected) < 1e-8);
    CHECK(std::arg(sol.v(1)) == doctest::Approx(0.0).epsilon(1e-10)); // no real power, no angle
    CHECK(sol.mismatch_norm < 1e-8);
}

TEST_CASE("solution determinism is bit-exact") {
    const Network net = cigre_mv_fixture();
    const Eigen::VectorXd u = nominal_inputs(net);
    const PowerFlowSolution a = solve_power_flow(net, u);
    const PowerFlowSolution b = solve_power_flow(net, u);
    REQUIRE(a.v.size() == b.v.size());
    for (int i = 0; i < a.v.size(); ++i) {
        CHECK(a.v(i).real() == b.v(i).real());
        CHECK(a.v(i).imag() == b.v(i).imag());
    }
    CHECK(a.mismatch_norm == b.mismatch_norm);
}

TEST_CASE("warm start reuses the previous solution") {
    const Network net = cigre_mv_fixture();
    const Eigen::VectorXd u = nominal_inputs(net);
    const PowerFlowSolution cold = solve_power_flow(net, u);

    Eigen::VectorXd u2 = u;
    u2(0) += 0.05;
    const PowerFlowSolution warm = solve_power_flow(net, u2, {}, &cold.v);
    CHECK(warm.iterations <= 3);
    CHECK(warm.mismatch_norm < 1e-8);
}

TEST_CASE("non-convergence raises a diverged-plant error with the residual") {
    const Network net = two_bus();
    Eigen::VectorXd u(2);
    u << 0.0, -900.0; // far beyond any feasible loading
    try {
        solve_power_flow(net, u);
        FAIL("expected divergence");
    } catch (const PlantDivergedError& e) {
        CHECK(e.last_residual > 0.0);
    }
}

TEST_CASE("residual contract holds over randomized feasible injections") {
    const Network net = cigre_mv_fixture();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);

    Eigen::VectorXd u = nominal_inputs(net);
    std::optional<PowerFlowSolution> warm;
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::VectorXd du(u.size());
        for (int i = 0; i < du.size(); ++i) du(i) = jitter(rng);
        const PowerFlowSolution sol =
            solve_power_flow(net, u + du, {}, warm ? &warm->v : nullptr);
        CHECK(sol.mismatch_norm < 1e-8);
        warm = sol;
    }
}

TEST_CASE("sensitivities match a finite-difference oracle on the mv fixture") {
    const Network net = cigre_mv_fixture();
    const Eigen::VectorXd u = nominal_inputs(net);
    const PowerFlowSolution sol = solve_power_flow(net, u);
    const MonitorSet monitors = MonitorSet::standard(net);
    const SensitivityMatrix sens = compute_sensitivities(net, sol, monitors);

    // the quotient divides by 2e-6, so the oracle solves need a residual floor
    // far below the default tolerance; the error of each column is judged
    // against that column's scale
    const PowerFlowOptions tight{1e-12, 40};
    const double h = 1e-6;
    double max_rel_err = 0.0;
    for (int col = 0; col < sens.cols(); ++col) {
        Eigen::VectorXd up = u, dn = u;
        up(col) += h;
        dn(col) -= h;
        const Eigen::VectorXd yp = monitors.measure(solve_power_flow(net, up, tight, &sol.v));
        const Eigen::VectorXd yn = monitors.measure(solve_power_flow(net, dn, tight, &sol.v));
        const Eigen::VectorXd fd = (yp - yn) / (2.0 * h);
        const double col_err = (fd - sens.m.col(col)).lpNorm<Eigen::Infinity>() /
                               fd.lpNorm<Eigen::Infinity>();
        max_rel_err = std::max(max_rel_err, col_err);
    }
    CHECK(max_rel_err < 1e-4);
}

TEST_CASE("linearization error shrinks quadratically") {
    const Network net = cigre_mv_fixture();
    const Eigen::VectorXd u = nominal_inputs(net);
    const PowerFlowSolution sol = solve_power_flow(net, u);
    const MonitorSet monitors = MonitorSet::standard(net);
    const SensitivityMatrix sens = compute_sensitivities(net, sol, monitors);
    const Eigen::VectorXd y0 = monitors.measure(sol);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd du(u.size());
    for (int i = 0; i < du.size(); ++i) du(i) = 0.2 * dist(rng);

    auto lin_error = [&](double scale) {
        const Eigen::VectorXd y =
            monitors.measure(solve_power_flow(net, u + scale * du, {}, &sol.v));
        return (y - y0 - scale * (sens.m * du)).lpNorm<Eigen::Infinity>();
    };

    const double e1 = lin_error(1.0);
    const double e2 = lin_error(0.5);
    CHECK(e1 > 0.0);
    CHECK(e1 / e2 > 2.5); // ~4x for a quadratic remainder
    CHECK(e1 / e2 < 6.0);
}

TEST_CASE("two-bus reactive sensitivity near the analytic slope") {
    const double x = 0.1;
    const Network net = two_bus(x);
    Eigen::VectorXd u(2);
    u << 0.0, -0.1;

    const PowerFlowSolution sol = solve_power_flow(net, u);
    const MonitorSet monitors = MonitorSet::standard(net);
    const SensitivityMatrix sens = compute_sensitivities(net, sol, monitors);

    // row 0 is vm_1, column 1 the reactive injection
    const double vm = std::abs(sol.v(1));
    const double exact = x / (2.0 * vm - 1.0);       // d|v|/dq of the closed form
    const double first_order = x / vm;                // small-angle approximation
    CHECK(std::abs(sens.m(0, 1) - exact) < 1e-6);
    CHECK(std::abs(sens.m(0, 1) - first_order) / first_order < 0.05);
}

TEST_CASE("duplicate actuators at one bus share a column") {
    Network net = cigre_mv_fixture();
    Actuator copy = net.actuators[2]; // pv_3
    copy.label = "pv_3_twin";
    net.actuators.push_back(copy);

    const Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * net.actuators.size());
    const PowerFlowSolution sol = solve_power_flow(net, u);
    const MonitorSet monitors = MonitorSet::standard(net);
    const SensitivityMatrix sens = compute_sensitivities(net, sol, monitors);

    const int a = 2 * 2, b = 2 * (static_cast<int>(net.actuators.size()) - 1);
    CHECK((sens.m.col(a) - sens.m.col(b)).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((sens.m.col(a + 1) - sens.m.col(b + 1)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("singular Jacobian at the two-bus collapse point is rejected") {
    const double x = 0.1;
    const Network net = two_bus(x);
    Eigen::VectorXd u(2);
    u << 0.0, -2.5; // exactly the tip of the two-bus loadability curve

    // the analytic solution v = 0.5 satisfies the equations, so a start there
    // converges immediately; the Jacobian at that point is singular
    Eigen::VectorXcd start(2);
    start << Complex(1.0, 0.0), Complex(two_bus_voltage(-2.5, x), 0.0);
    const PowerFlowSolution sol = solve_power_flow(net, u, {}, &start);
    CHECK(sol.mismatch_norm < 1e-8);

    const MonitorSet monitors = MonitorSet::standard(net);
    CHECK_THROWS_AS(compute_sensitivities(net, sol, monitors), IllConditionedError);
}
