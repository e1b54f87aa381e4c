#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "ofo/errors.hpp"
#include "ofo/fixtures.hpp"
#include "ofo/network.hpp"
#include "ofo/network_io.hpp"
#include "ofo/powerflow.hpp"

using namespace ofo;

namespace {

Network two_bus_line(Complex z = Complex(0.0, 0.1)) {
    Network net;
    net.base_mva = 1.0;
    Bus slack;
    slack.id = 0;
    slack.kind = BusKind::slack;
    slack.v_min = 0.5;
    slack.v_max = 1.5;
    Bus load;
    load.id = 1;
    load.v_min = 0.5;
    load.v_max = 1.5;
    net.buses = {slack, load};
    Branch line;
    line.from_bus = 0;
    line.to_bus = 1;
    line.z = z;
    net.branches = {line};
    net.injections = {Complex(0, 0), Complex(0, 0)};
    return net;
}

} // namespace

TEST_CASE("admittance of a single purely reactive line") {
    const Network net = two_bus_line();
    const Eigen::MatrixXcd y = build_admittance(net);
    // 1/(j0.1) = -10j on the diagonal, +10j off-diagonal
    CHECK(y(0, 0).imag() == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(y(0, 1).imag() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(y(1, 0).imag() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(y(1, 1).imag() == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(y.real().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("degenerate networks are rejected") {
    Network net = two_bus_line();
    net.branches.clear();
    CHECK_THROWS_AS(net.validate(), DegenerateNetworkError);

    Network zero_z = two_bus_line(Complex(0.0, 0.0));
    CHECK_THROWS_AS(zero_z.validate(), DegenerateNetworkError);
    CHECK_THROWS_AS(build_admittance(zero_z), DegenerateNetworkError);

    Network double_slack = two_bus_line();
    double_slack.buses[1].kind = BusKind::slack;
    CHECK_THROWS_AS(double_slack.validate(), DegenerateNetworkError);
}

TEST_CASE("admittance row sums match direct summation over fixture data") {
    const Network net = cigre_mv_fixture();
    const Eigen::MatrixXcd y = build_admittance(net);

    // independent oracle: accumulate shunt-type terms per bus straight from
    // the branch and bus lists (series parts cancel in each row sum)
    std::vector<Complex> expected(net.buses.size(), Complex(0, 0));
    for (const Branch& br : net.branches) {
        const int f = net.bus_index(br.from_bus);
        const int t = net.bus_index(br.to_bus);
        const Complex ys = 1.0 / br.z;
        const Complex ysh(0.0, br.b_charging / 2.0);
        const double tap = br.tap;
        expected[f] += (ys + ysh) / (tap * tap) - ys / tap;
        expected[t] += ys + ysh - ys / tap;
    }
    for (std::size_t i = 0; i < net.buses.size(); ++i) expected[i] += net.buses[i].shunt;

    for (int i = 0; i < y.rows(); ++i) {
        const Complex row_sum = y.row(i).sum();
        CHECK(std::abs(row_sum - expected[i]) < 1e-9);
    }
}

TEST_CASE("admittance assembly is permutation-equivariant") {
    const Network net = cigre_mv_fixture();
    const Eigen::MatrixXcd y = build_admittance(net);
    const int n = static_cast<int>(net.buses.size());

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 3; ++trial) {
        std::shuffle(perm.begin(), perm.end(), rng);

        Network shuffled = net;
        for (int i = 0; i < n; ++i) {
            shuffled.buses[perm[i]] = net.buses[i];
            shuffled.injections[perm[i]] = net.injections[i];
        }
        // bus ids travel with the buses, so branches need no rewrite
        const Eigen::MatrixXcd ys = build_admittance(shuffled);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(ys(perm[i], perm[j]) - y(i, j)) < 1e-14);
    }
}

TEST_CASE("per-unit conversion round trip") {
    Network net = cigre_mv_fixture();
    net.base_mva = 25.0;
    for (double mw : {0.001, 0.5, 1.5, 19.99, 1234.5}) {
        const double back = net.to_mw(net.to_pu(mw));
        CHECK(std::abs(back - mw) <= 1e-12 * mw);
    }
}

TEST_CASE("mv fixture invariants") {
    const Network net = cigre_mv_fixture();
    CHECK(net.buses.size() == 14);
    CHECK_NOTHROW(net.validate());

    int slack_count = 0;
    for (const Bus& b : net.buses)
        if (b.kind == BusKind::slack) ++slack_count;
    CHECK(slack_count == 1);

    // wind plant at bus 7 rated 1.5 MW
    const auto wpp = std::find_if(net.actuators.begin(), net.actuators.end(),
                                  [](const Actuator& a) { return a.label == "wpp"; });
    REQUIRE(wpp != net.actuators.end());
    CHECK(wpp->bus == 7);
    CHECK(wpp->p_max == doctest::Approx(net.to_pu(1.5)));

    // power flow at schedule converges tightly
    const PowerFlowSolution sol = solve_power_flow(net, nominal_inputs(net));
    CHECK(sol.mismatch_norm < 1e-8);
    CHECK(sol.iterations <= 10);
    for (int i = 0; i < sol.v.size(); ++i) {
        CHECK(std::abs(sol.v(i)) > 0.9);
        CHECK(std::abs(sol.v(i)) < 1.1);
    }
}

TEST_CASE("lv fixture invariants across seeds") {
    for (unsigned seed = 0; seed < 6; ++seed) {
        CAPTURE(seed);
        const Network net = lv_feeder_fixture(seed);
        CHECK_NOTHROW(net.validate());
        CHECK(net.buses.size() <= 10);
        CHECK(net.actuators.size() >= 2);

        REQUIRE(net.pcc_branch.has_value());
        const Branch& pcc = net.branches[*net.pcc_branch];
        const int slack = net.slack_index();
        CHECK((net.bus_index(pcc.from_bus) == slack || net.bus_index(pcc.to_bus) == slack));

        double p_max_total = 0.0;
        for (const Actuator& a : net.actuators) p_max_total += a.p_max;
        CHECK(p_max_total > 0.0);

        // nominal operating point stays inside the voltage band
        const PowerFlowSolution sol = solve_power_flow(net, nominal_inputs(net));
        CHECK(sol.mismatch_norm < 1e-8);
        for (std::size_t i = 0; i < net.buses.size(); ++i) {
            CHECK(std::abs(sol.v(i)) >= net.buses[i].v_min);
            CHECK(std::abs(sol.v(i)) <= net.buses[i].v_max);
        }
    }
}

TEST_CASE("network JSON round trip") {
    const Network net = cigre_mv_fixture();
    const std::string text = network_to_json(net);
    const Network back = parse_network_json(text);

    CHECK(back.buses.size() == net.buses.size());
    CHECK(back.actuators.size() == net.actuators.size());
    CHECK(back.base_mva == net.base_mva);
    REQUIRE(back.pcc_branch.has_value());
    CHECK(*back.pcc_branch == *net.pcc_branch);

    const Eigen::MatrixXcd y0 = build_admittance(net);
    const Eigen::MatrixXcd y1 = build_admittance(back);
    CHECK((y1 - y0).cwiseAbs().maxCoeff() < 1e-12);

    for (std::size_t i = 0; i < net.buses.size(); ++i)
        CHECK(std::abs(back.injections[i] - net.injections[i]) < 1e-12);
}

TEST_CASE("network JSON loader reports malformed input") {
    CHECK_THROWS_AS(parse_network_json("{ not json"), ParseError);
    CHECK_THROWS_AS(parse_network_json("{\"buses\": []}"), ParseError);
    // unknown bus in a branch
    const char* bad = R"({
        "buses": [{"id": 0, "kind": "slack"}, {"id": 1}],
        "branches": [{"from_bus": 0, "to_bus": 7, "x": 0.1}]
    })";
    CHECK_THROWS(parse_network_json(bad));
}
