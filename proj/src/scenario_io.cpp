#include "ofo/scenario_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ofo/errors.hpp"
#include "ofo/network_io.hpp"

namespace ofo {

using nlohmann::json;

namespace {

Network resolve_ref(const std::string& ref, const std::string& base_dir) {
    namespace fs = std::filesystem;
    if (ref == "cigre_mv" || ref.rfind("lv_feeder:", 0) == 0) return resolve_network(ref);
    fs::path p(ref);
    if (p.is_relative()) {
        const fs::path joined = fs::path(base_dir) / p;
        if (fs::exists(joined)) return load_network_json(joined.string());
    }
    return resolve_network(ref);
}

Event parse_event(const json& je, const std::string& origin) {
    Event e;
    if (!je.contains("at_iteration") || !je["at_iteration"].is_number_integer())
        throw ParseError(origin + ": event needs integer 'at_iteration'");
    e.at_iteration = je["at_iteration"].get<int>();
    const std::string kind = je.value("kind", "");
    if (kind == "actuator_disconnect") {
        e.kind = Event::Kind::actuator_disconnect;
        e.target = je.value("target", "");
        if (e.target.empty())
            throw ParseError(origin + ": actuator_disconnect event needs 'target'");
    } else if (kind == "load_step") {
        e.kind = Event::Kind::load_step;
        e.factor = je.value("factor", 1.0);
    } else if (kind == "setpoint_change") {
        e.kind = Event::Kind::setpoint_change;
        e.p = je.value("p", 0.0);
        e.q = je.value("q", 0.0);
    } else {
        throw ParseError(origin + ": unknown event kind '" + kind + "'");
    }
    return e;
}

} // namespace

Scenario parse_scenario_json(const std::string& text, const std::string& origin,
                             const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }

    Scenario s;
    s.name = j.value("name", "scenario");

    const std::string kind = j.value("kind", "");
    if (kind == "congestion") s.kind = Scenario::Kind::congestion;
    else if (kind == "tracking") s.kind = Scenario::Kind::tracking;
    else throw ParseError(origin + ": scenario 'kind' must be 'congestion' or 'tracking'");

    if (j.contains("network")) {
        if (!j["network"].is_string())
            throw ParseError(origin + ": 'network' must be a fixture name or file path");
        s.network = resolve_ref(j["network"].get<std::string>(), base_dir);
    }
    if (j.contains("hierarchy")) {
        const json& jh = j["hierarchy"];
        if (!jh.contains("root") || !jh["root"].is_string())
            throw ParseError(origin + ": 'hierarchy.root' must be a network reference");
        HierarchyFixture fix;
        fix.root = resolve_ref(jh["root"].get<std::string>(), base_dir);
        for (const auto& jc : jh.value("children", json::array())) {
            HierarchyFixture::Child child;
            if (!jc.contains("network") || !jc["network"].is_string())
                throw ParseError(origin + ": hierarchy child needs a 'network' reference");
            child.network = resolve_ref(jc["network"].get<std::string>(), base_dir);
            if (!jc.contains("bus") || !jc["bus"].is_number_integer())
                throw ParseError(origin + ": hierarchy child needs integer 'bus'");
            child.coupling_bus = jc["bus"].get<int>();
            child.label = jc.value("label", "");
            fix.children.push_back(std::move(child));
        }
        s.hierarchy = std::move(fix);
    }
    if (!s.network && !s.hierarchy)
        throw ParseError(origin + ": scenario needs 'network' or 'hierarchy'");

    s.alpha = j.value("alpha", s.alpha);
    s.beta = j.value("beta", s.beta);
    s.momentum_enabled = j.value("momentum_enabled", true);
    s.max_iterations = j.value("max_iterations", s.max_iterations);
    s.load_scale = j.value("load_scale", 1.0);
    s.noise_std = j.value("noise_std", 0.0);
    s.seed = j.value("seed", 0ULL);
    if (j.contains("sensitivity_policy")) {
        const std::string policy = j["sensitivity_policy"].get<std::string>();
        if (policy == "frozen") s.sensitivity_policy = SensitivityPolicy::frozen;
        else if (policy == "recompute_each_step")
            s.sensitivity_policy = SensitivityPolicy::recompute_each_step;
        else throw ParseError(origin + ": unknown sensitivity_policy '" + policy + "'");
    }

    if (j.contains("setpoint")) {
        s.p_set = j["setpoint"].value("p", 0.0);
        s.q_set = j["setpoint"].value("q", 0.0);
    }

    for (const auto& je : j.value("events", json::array())) s.events.push_back(parse_event(je, origin));

    s.validate();
    return s;
}

Scenario load_scenario_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_scenario_json(ss.str(), path, dir.empty() ? "." : dir);
}

} // namespace ofo
