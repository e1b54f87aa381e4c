#include "ofo/network_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ofo/errors.hpp"
#include "ofo/fixtures.hpp"

namespace ofo {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ParseError(origin + ": " + what);
}

double num(const json& j, const char* key, const std::string& origin,
           std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        fail(origin, std::string("missing field '") + key + "'");
    }
    if (!j[key].is_number()) fail(origin, std::string("field '") + key + "' must be a number");
    return j[key].get<double>();
}

} // namespace

Network parse_network_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, e.what());
    }

    Network net;
    net.base_mva = j.value("base_mva", 1.0);

    if (!j.contains("buses") || !j["buses"].is_array()) fail(origin, "missing 'buses' array");
    for (const auto& jb : j["buses"]) {
        Bus b;
        b.id = static_cast<int>(num(jb, "id", origin));
        const std::string kind = jb.value("kind", "pq");
        if (kind == "slack") b.kind = BusKind::slack;
        else if (kind == "pq") b.kind = BusKind::pq;
        else fail(origin, "bus kind must be 'slack' or 'pq', got '" + kind + "'");
        b.v_nominal = num(jb, "v_nominal", origin, 1.0);
        b.v_min = num(jb, "v_min", origin, b.v_nominal - 0.05);
        b.v_max = num(jb, "v_max", origin, b.v_nominal + 0.05);
        b.shunt = Complex(num(jb, "shunt_g", origin, 0.0), num(jb, "shunt_b", origin, 0.0));
        net.buses.push_back(b);
    }

    if (!j.contains("branches") || !j["branches"].is_array()) fail(origin, "missing 'branches' array");
    for (const auto& jb : j["branches"]) {
        Branch br;
        br.from_bus = static_cast<int>(num(jb, "from_bus", origin));
        br.to_bus = static_cast<int>(num(jb, "to_bus", origin));
        br.z = Complex(num(jb, "r", origin, 0.0), num(jb, "x", origin));
        br.b_charging = num(jb, "b_charging", origin, 0.0);
        br.s_max = num(jb, "s_max", origin, 0.0);
        br.is_transformer = jb.value("is_transformer", false);
        br.tap = num(jb, "tap", origin, 1.0);
        net.branches.push_back(br);
    }

    for (const auto& ja : j.value("actuators", json::array())) {
        Actuator a;
        a.bus = static_cast<int>(num(ja, "bus", origin));
        a.p_min = num(ja, "p_min", origin);
        a.p_max = num(ja, "p_max", origin);
        a.q_min = num(ja, "q_min", origin);
        a.q_max = num(ja, "q_max", origin);
        a.p_nominal = num(ja, "p_nominal", origin, 0.0);
        a.label = ja.value("label", "");
        net.actuators.push_back(a);
    }

    net.injections.assign(net.buses.size(), Complex(0.0, 0.0));
    for (const auto& ji : j.value("injections", json::array())) {
        const int id = static_cast<int>(num(ji, "bus", origin));
        const int idx = net.bus_index(id); // throws if unknown
        net.injections[idx] += Complex(num(ji, "p", origin), num(ji, "q", origin, 0.0));
    }

    if (j.contains("pcc_branch")) {
        if (!j["pcc_branch"].is_number_integer()) fail(origin, "'pcc_branch' must be an integer");
        net.pcc_branch = j["pcc_branch"].get<int>();
    }

    net.validate();
    return net;
}

Network load_network_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network_json(ss.str(), path);
}

std::string network_to_json(const Network& network) {
    json j;
    j["base_mva"] = network.base_mva;
    if (network.pcc_branch) j["pcc_branch"] = *network.pcc_branch;

    j["buses"] = json::array();
    for (const Bus& b : network.buses) {
        json jb;
        jb["id"] = b.id;
        jb["kind"] = (b.kind == BusKind::slack) ? "slack" : "pq";
        jb["v_nominal"] = b.v_nominal;
        jb["v_min"] = b.v_min;
        jb["v_max"] = b.v_max;
        if (b.shunt != Complex(0.0, 0.0)) {
            jb["shunt_g"] = b.shunt.real();
            jb["shunt_b"] = b.shunt.imag();
        }
        j["buses"].push_back(jb);
    }

    j["branches"] = json::array();
    for (const Branch& br : network.branches) {
        json jb;
        jb["from_bus"] = br.from_bus;
        jb["to_bus"] = br.to_bus;
        jb["r"] = br.z.real();
        jb["x"] = br.z.imag();
        if (br.b_charging != 0.0) jb["b_charging"] = br.b_charging;
        jb["s_max"] = br.s_max;
        if (br.is_transformer) jb["is_transformer"] = true;
        if (br.tap != 1.0) jb["tap"] = br.tap;
        j["branches"].push_back(jb);
    }

    j["actuators"] = json::array();
    for (const Actuator& a : network.actuators) {
        json ja;
        ja["bus"] = a.bus;
        ja["p_min"] = a.p_min;
        ja["p_max"] = a.p_max;
        ja["q_min"] = a.q_min;
        ja["q_max"] = a.q_max;
        ja["p_nominal"] = a.p_nominal;
        ja["label"] = a.label;
        j["actuators"].push_back(ja);
    }

    j["injections"] = json::array();
    for (std::size_t i = 0; i < network.buses.size(); ++i) {
        if (network.injections[i] == Complex(0.0, 0.0)) continue;
        json ji;
        ji["bus"] = network.buses[i].id;
        ji["p"] = network.injections[i].real();
        ji["q"] = network.injections[i].imag();
        j["injections"].push_back(ji);
    }

    return j.dump(2);
}

void save_network_json(const Network& network, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write network file: " + path);
    out << network_to_json(network) << "\n";
}

Network resolve_network(const std::string& ref) {
    if (ref == "cigre_mv") return cigre_mv_fixture();
    if (ref.rfind("lv_feeder:", 0) == 0) {
        const std::string tail = ref.substr(10);
        try {
            return lv_feeder_fixture(static_cast<unsigned>(std::stoul(tail)));
        } catch (const std::exception&) {
            throw ParseError("bad lv_feeder seed in network reference: " + ref);
        }
    }
    if (std::filesystem::exists(ref)) return load_network_json(ref);
    throw ParseError("network reference is neither a fixture name nor an existing file: " + ref);
}

} // namespace ofo
