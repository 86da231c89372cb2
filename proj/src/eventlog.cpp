#include "hashgraph/eventlog.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace hashgraph {

namespace {

nlohmann::ordered_json parent_json(const std::optional<EventId>& p) {
    if (!p) return nullptr;
    return to_hex(*p);
}

std::optional<EventId> parent_from_json(const nlohmann::json& j, const char* field) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_string()) throw LogParseError(std::string(field) + " must be hex or null");
    auto d = digest_from_hex(j.get<std::string>());
    if (!d) throw LogParseError(std::string(field) + " is not a 32-byte hex digest");
    return *d;
}

} // namespace

std::string event_log_line(const Event& e) {
    nlohmann::ordered_json j;
    j["id"] = to_hex(e.id);
    j["creator"] = e.creator;
    j["self_parent"] = parent_json(e.self_parent);
    j["other_parent"] = parent_json(e.other_parent);
    j["ts"] = e.timestamp;
    j["payload"] = bytes_to_hex(e.payload);
    return j.dump();
}

void write_event_log(std::ostream& os, const World& w) {
    for (EventIndex i = 0; i < w.size(); ++i) os << event_log_line(w.event_at(i)) << '\n';
}

std::string event_log_string(const World& w) {
    std::ostringstream os;
    write_event_log(os, w);
    return os.str();
}

Event parse_event_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw LogParseError(std::string("bad event line: ") + e.what());
    }
    if (!j.is_object()) throw LogParseError("event line is not a JSON object");
    for (const char* field : {"id", "creator", "self_parent", "other_parent", "ts", "payload"})
        if (!j.contains(field)) throw LogParseError(std::string("missing field ") + field);

    Event e;
    auto id = digest_from_hex(j["id"].get<std::string>());
    if (!id) throw LogParseError("id is not a 32-byte hex digest");
    e.id = *id;
    if (!j["creator"].is_number_unsigned()) throw LogParseError("creator must be an unsigned int");
    e.creator = j["creator"].get<PeerId>();
    e.self_parent = parent_from_json(j["self_parent"], "self_parent");
    e.other_parent = parent_from_json(j["other_parent"], "other_parent");
    if (!j["ts"].is_number_unsigned()) throw LogParseError("ts must be an unsigned int");
    e.timestamp = j["ts"].get<std::uint64_t>();
    auto payload = bytes_from_hex(j["payload"].get<std::string>());
    if (!payload) throw LogParseError("payload is not hex");
    e.payload = std::move(*payload);
    return e;
}

std::vector<Event> read_event_log(std::istream& is) {
    std::vector<Event> events;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            events.push_back(parse_event_line(line));
        } catch (const LogParseError& e) {
            throw LogParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return events;
}

World world_from_events(const std::vector<Event>& events, std::optional<ProtocolParams> params) {
    ProtocolParams p;
    if (params) {
        p = *params;
    } else {
        PeerId max_creator = 1;
        for (const Event& e : events) max_creator = std::max(max_creator, e.creator);
        p.n_peers = max_creator + 1;
    }
    World w(p);
    for (const Event& e : events) w.insert(e);
    return w;
}

World load_event_log(std::istream& is, std::optional<ProtocolParams> params) {
    return world_from_events(read_event_log(is), params);
}

void write_dot(std::ostream& os, const World& w) {
    os << "digraph hashgraph {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=box, fontsize=10];\n";
    for (EventIndex i = 0; i < w.size(); ++i) {
        const Event& e = w.event_at(i);
        os << "  e" << i << " [label=\"" << short_hex(e.id) << "\\nP" << e.creator << " r"
           << w.round_of_idx(i) << (w.is_witness_idx(i) ? " W" : "") << "\"];\n";
    }
    for (EventIndex i = 0; i < w.size(); ++i) {
        auto sp = w.self_parent_index(i);
        auto op = w.other_parent_index(i);
        if (sp) os << "  e" << *sp << " -> e" << i << ";\n";
        if (op) os << "  e" << *op << " -> e" << i << " [style=dashed];\n";
    }
    os << "}\n";
}

} // namespace hashgraph
