#pragma once

#include <string>

#include "ofo/network.hpp"

namespace ofo {

/// Parse a network from its JSON description (sections: buses, branches,
/// actuators, injections). Throws ParseError on malformed input and
/// DegenerateNetworkError when the parsed network fails validation.
Network load_network_json(const std::string& path);
Network parse_network_json(const std::string& text, const std::string& origin = "<string>");

/// Serialize in the same schema accepted by the loader.
std::string network_to_json(const Network& network);
void save_network_json(const Network& network, const std::string& path);

/// Resolve a network reference: a known fixture name ("cigre_mv",
/// "lv_feeder:<seed>") or a path to a JSON file.
Network resolve_network(const std::string& ref);

} // namespace ofo
