#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hashgraph/world.hpp"

namespace hashgraph {

// One event per line as a JSON object with fields in fixed order:
// {"id":hex,"creator":int,"self_parent":hex|null,"other_parent":hex|null,
//  "ts":int,"payload":hex}, topologically sorted (parents first).
std::string event_log_line(const Event& e);

void write_event_log(std::ostream& os, const World& w);
std::string event_log_string(const World& w);

Event parse_event_line(const std::string& line); // throws LogParseError
std::vector<Event> read_event_log(std::istream& is);

// Builds a world from parsed events; peer count is inferred from the
// creators when params are not given. Insert errors propagate.
World world_from_events(const std::vector<Event>& events,
                        std::optional<ProtocolParams> params = std::nullopt);
World load_event_log(std::istream& is, std::optional<ProtocolParams> params = std::nullopt);

// DOT rendering: nodes carry id prefix, creator, round, and witness flag;
// self-parent edges are solid, other-parent edges dashed.
void write_dot(std::ostream& os, const World& w);

} // namespace hashgraph
