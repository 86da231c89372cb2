#pragma once

#include <string>
#include <vector>

#include "hashgraph/simnet.hpp"

namespace hashgraph {

// Run manifest: the config plus the observed spawn order. Manifest and code
// version fully determine every output of a run.
struct RunManifest {
    std::string version = "hashgraph-sim/1";
    std::string rng = "mt19937_64";
    SimConfig config;
    std::uint64_t steps = 0;
    std::vector<EventId> spawn_order;
};

std::string config_to_json(const SimConfig& cfg);
SimConfig config_from_json(const std::string& text); // throws LogParseError/ConfigError

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

RunManifest make_manifest(const Simulation& sim);

} // namespace hashgraph
