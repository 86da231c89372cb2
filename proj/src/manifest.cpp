#include "hashgraph/manifest.hpp"

#include "json.hpp"

namespace hashgraph {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kind_name(AdversarySpec::Kind k) {
    switch (k) {
        case AdversarySpec::Kind::forker: return "forker";
        case AdversarySpec::Kind::equivocator: return "equivocator";
        case AdversarySpec::Kind::delayer: return "delayer";
    }
    return "?";
}

AdversarySpec::Kind kind_from_name(const std::string& s) {
    if (s == "forker") return AdversarySpec::Kind::forker;
    if (s == "equivocator") return AdversarySpec::Kind::equivocator;
    if (s == "delayer") return AdversarySpec::Kind::delayer;
    throw ConfigError("unknown adversary kind: " + s);
}

ordered_json config_json(const SimConfig& cfg) {
    ordered_json j;
    j["peers"] = cfg.params.n_peers;
    j["d"] = cfg.params.d;
    j["c"] = cfg.params.c;
    j["honest"] = cfg.honest;
    j["seed"] = cfg.seed;

    ordered_json policy;
    switch (cfg.policy.kind) {
        case SyncPolicy::Kind::uniform:
            policy["kind"] = "uniform";
            break;
        case SyncPolicy::Kind::skewed:
            policy["kind"] = "skewed";
            policy["weights"] = cfg.policy.weights;
            break;
        case SyncPolicy::Kind::scripted: {
            policy["kind"] = "scripted";
            ordered_json trace = ordered_json::array();
            for (const auto& [s, r] : cfg.policy.trace) trace.push_back({s, r});
            policy["trace"] = std::move(trace);
            break;
        }
    }
    j["policy"] = std::move(policy);
    j["fairness_window"] = cfg.fairness_window;

    if (cfg.adversary) {
        ordered_json adv;
        adv["kind"] = kind_name(cfg.adversary->kind);
        adv["peer"] = cfg.adversary->peer;
        if (cfg.adversary->kind == AdversarySpec::Kind::forker)
            adv["branches"] = cfg.adversary->branches;
        if (cfg.adversary->kind == AdversarySpec::Kind::delayer)
            adv["max_delay"] = cfg.adversary->max_delay;
        j["adversary"] = std::move(adv);
    } else {
        j["adversary"] = nullptr;
    }

    ordered_json stop;
    stop["max_steps"] = cfg.stop.max_steps;
    if (cfg.stop.target_round)
        stop["target_round"] = *cfg.stop.target_round;
    else
        stop["target_round"] = nullptr;
    j["stop"] = std::move(stop);
    return j;
}

SimConfig config_from(const nlohmann::json& j) {
    SimConfig cfg;
    cfg.params.n_peers = j.at("peers").get<std::uint32_t>();
    cfg.params.d = j.at("d").get<std::uint32_t>();
    cfg.params.c = j.at("c").get<std::uint32_t>();
    cfg.honest = j.at("honest").get<std::vector<PeerId>>();
    cfg.seed = j.at("seed").get<std::uint64_t>();

    const auto& policy = j.at("policy");
    std::string kind = policy.at("kind").get<std::string>();
    if (kind == "uniform") {
        cfg.policy.kind = SyncPolicy::Kind::uniform;
    } else if (kind == "skewed") {
        cfg.policy.kind = SyncPolicy::Kind::skewed;
        cfg.policy.weights = policy.at("weights").get<std::vector<std::uint64_t>>();
    } else if (kind == "scripted") {
        cfg.policy.kind = SyncPolicy::Kind::scripted;
        for (const auto& pair : policy.at("trace"))
            cfg.policy.trace.emplace_back(pair.at(0).get<PeerId>(), pair.at(1).get<PeerId>());
    } else {
        throw ConfigError("unknown sync policy: " + kind);
    }

    cfg.fairness_window = j.at("fairness_window").get<std::uint64_t>();
    if (!j.at("adversary").is_null()) {
        const auto& adv = j.at("adversary");
        AdversarySpec spec;
        spec.kind = kind_from_name(adv.at("kind").get<std::string>());
        spec.peer = adv.at("peer").get<PeerId>();
        if (adv.contains("branches")) spec.branches = adv.at("branches").get<std::uint32_t>();
        if (adv.contains("max_delay")) spec.max_delay = adv.at("max_delay").get<std::uint64_t>();
        cfg.adversary = spec;
    }

    const auto& stop = j.at("stop");
    cfg.stop.max_steps = stop.at("max_steps").get<std::uint64_t>();
    if (!stop.at("target_round").is_null())
        cfg.stop.target_round = stop.at("target_round").get<std::uint32_t>();
    return cfg;
}

} // namespace

std::string config_to_json(const SimConfig& cfg) {
    return config_json(cfg).dump(2);
}

SimConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw LogParseError(std::string("bad config json: ") + e.what());
    }
    try {
        return config_from(j);
    } catch (const nlohmann::json::exception& e) {
        throw LogParseError(std::string("bad config json: ") + e.what());
    }
}

std::string manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["version"] = m.version;
    j["rng"] = m.rng;
    j["config"] = config_json(m.config);
    j["steps"] = m.steps;
    j["events"] = m.spawn_order.size();
    ordered_json order = ordered_json::array();
    for (const EventId& id : m.spawn_order) order.push_back(to_hex(id));
    j["spawn_order"] = std::move(order);
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw LogParseError(std::string("bad manifest json: ") + e.what());
    }
    RunManifest m;
    try {
        m.version = j.at("version").get<std::string>();
        m.rng = j.at("rng").get<std::string>();
        m.config = config_from(j.at("config"));
        m.steps = j.at("steps").get<std::uint64_t>();
        for (const auto& id : j.at("spawn_order")) {
            auto d = digest_from_hex(id.get<std::string>());
            if (!d) throw LogParseError("bad digest in spawn order");
            m.spawn_order.push_back(*d);
        }
    } catch (const nlohmann::json::exception& e) {
        throw LogParseError(std::string("bad manifest json: ") + e.what());
    }
    if (m.rng != "mt19937_64")
        throw ConfigError("unsupported rng in manifest: " + m.rng);
    return m;
}

RunManifest make_manifest(const Simulation& sim) {
    RunManifest m;
    m.config = sim.config();
    m.steps = sim.steps();
    m.spawn_order = sim.spawn_log();
    return m;
}

} // namespace hashgraph
