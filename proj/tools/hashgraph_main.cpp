#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hashgraph/checks.hpp"
#include "hashgraph/elections.hpp"
#include "hashgraph/eventlog.hpp"
#include "hashgraph/manifest.hpp"
#include "hashgraph/ordering.hpp"
#include "hashgraph/simnet.hpp"

namespace {

using namespace hashgraph;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;

struct SimFlags {
    std::uint32_t peers = 4;
    std::int64_t honest = -1; // -1: all peers honest (minus the adversary)
    std::uint64_t seed = 1;
    std::uint32_t d = 1;
    std::uint32_t c = 4;
    std::int64_t target_round = -1;
    std::uint64_t max_steps = 100000;
    std::uint64_t fairness_window = 0;
    std::string adversary; // "forker[:branches=2]" | "delayer[:max-delay=4]" | "equivocator"; optional ":peer=K"
    std::string policy = "uniform"; // uniform | skewed:w0,w1,... | scripted:<file>
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

AdversarySpec parse_adversary(const std::string& text, std::uint32_t peers) {
    AdversarySpec spec;
    spec.peer = peers - 1;
    auto parts = split(text, ':');
    const std::string& kind = parts[0];
    if (kind == "forker")
        spec.kind = AdversarySpec::Kind::forker;
    else if (kind == "equivocator")
        spec.kind = AdversarySpec::Kind::equivocator;
    else if (kind == "delayer")
        spec.kind = AdversarySpec::Kind::delayer;
    else
        throw ConfigError("unknown adversary kind: " + kind);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto kv = split(parts[i], '=');
        if (kv.size() != 2) throw ConfigError("bad adversary parameter: " + parts[i]);
        if (kv[0] == "peer")
            spec.peer = static_cast<PeerId>(std::stoul(kv[1]));
        else if (kv[0] == "branches")
            spec.branches = static_cast<std::uint32_t>(std::stoul(kv[1]));
        else if (kv[0] == "max-delay" || kv[0] == "max_delay")
            spec.max_delay = std::stoull(kv[1]);
        else
            throw ConfigError("unknown adversary parameter: " + kv[0]);
    }
    return spec;
}

SyncPolicy parse_policy(const std::string& text) {
    SyncPolicy policy;
    if (text == "uniform") return policy;
    if (text.rfind("skewed:", 0) == 0) {
        policy.kind = SyncPolicy::Kind::skewed;
        for (const std::string& w : split(text.substr(7), ','))
            policy.weights.push_back(std::stoull(w));
        return policy;
    }
    if (text.rfind("scripted:", 0) == 0) {
        policy.kind = SyncPolicy::Kind::scripted;
        std::ifstream in(text.substr(9));
        if (!in) throw ConfigError("cannot open trace file " + text.substr(9));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto pair = split(line, ' ');
            if (pair.size() != 2) throw ConfigError("trace lines must be '<sender> <receiver>'");
            policy.trace.emplace_back(static_cast<PeerId>(std::stoul(pair[0])),
                                      static_cast<PeerId>(std::stoul(pair[1])));
        }
        return policy;
    }
    throw ConfigError("unknown sync policy: " + text);
}

SimConfig build_config(const SimFlags& f) {
    SimConfig cfg;
    cfg.params.n_peers = f.peers;
    cfg.params.d = f.d;
    cfg.params.c = f.c;
    cfg.seed = f.seed;
    cfg.fairness_window = f.fairness_window;
    cfg.policy = parse_policy(f.policy);
    if (!f.adversary.empty()) cfg.adversary = parse_adversary(f.adversary, f.peers);

    std::int64_t honest_count = f.honest;
    if (honest_count < 0) honest_count = cfg.adversary ? f.peers - 1 : f.peers;
    if (honest_count > f.peers) throw ConfigError("more honest peers than peers");
    if (cfg.adversary) {
        for (PeerId p = 0, kept = 0; p < f.peers && kept < honest_count; ++p)
            if (p != cfg.adversary->peer) {
                cfg.honest.push_back(p);
                ++kept;
            }
        if (cfg.honest.size() != static_cast<std::size_t>(honest_count))
            throw ConfigError("honest count does not fit around the adversary");
    } else {
        for (PeerId p = 0; p < honest_count; ++p) cfg.honest.push_back(p);
    }

    cfg.stop.max_steps = f.max_steps;
    if (f.target_round >= 0) cfg.stop.target_round = static_cast<std::uint32_t>(f.target_round);
    cfg.validate();
    return cfg;
}

void add_sim_flags(CLI::App* cmd, SimFlags& f) {
    cmd->add_option("--peers", f.peers, "number of peers");
    cmd->add_option("--honest", f.honest, "number of honest peers (default: all but the adversary)");
    cmd->add_option("--seed", f.seed, "rng seed")->envname("HASHGRAPH_SEED");
    cmd->add_option("--d", f.d, "first regular voting round offset");
    cmd->add_option("--c", f.c, "coin round frequency");
    cmd->add_option("--target-round", f.target_round, "stop once this round is reached");
    cmd->add_option("--max-steps", f.max_steps, "hard step cap");
    cmd->add_option("--fairness-window", f.fairness_window,
                    "every ordered honest pair syncs within this many steps (0: 8*N^2)");
    cmd->add_option("--adversary", f.adversary,
                    "forker[:branches=B][:peer=K] | delayer[:max-delay=D][:peer=K] | equivocator[:peer=K]");
    cmd->add_option("--policy", f.policy, "uniform | skewed:w0,w1,... | scripted:<trace file>");
    cmd->set_config("--config", "", "flat key=value config file; flags override");
}

ProtocolParams log_params(const std::vector<Event>& events, std::int64_t peers, std::uint32_t d,
                          std::uint32_t c) {
    ProtocolParams p;
    if (peers > 0) {
        p.n_peers = static_cast<std::uint32_t>(peers);
    } else {
        PeerId max_creator = 1;
        for (const Event& e : events) max_creator = std::max(max_creator, e.creator);
        p.n_peers = max_creator + 1;
    }
    p.d = d;
    p.c = c;
    return p;
}

std::vector<Event> read_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LogParseError("cannot open log file " + path);
    return read_event_log(in);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << content;
}

int cmd_simulate(const SimFlags& flags, const std::string& out_path,
                 const std::string& manifest_path) {
    SimConfig cfg = build_config(flags);
    Simulation sim(cfg);
    sim.run();

    write_file(out_path, event_log_string(sim.global_world()));
    write_file(manifest_path, manifest_to_json(make_manifest(sim)));

    std::cout << "steps=" << sim.steps() << " events=" << sim.global_world().size()
              << " max_round=" << sim.global_world().max_round() << " log=" << out_path
              << " manifest=" << manifest_path << "\n";
    return kExitOk;
}

int cmd_order(const std::string& log_path, std::int64_t peers, std::uint32_t d, std::uint32_t c,
              const std::string& format, bool explain, const std::string& out_path) {
    auto events = read_log_file(log_path);
    World w = world_from_events(events, log_params(events, peers, d, c));
    FameEvaluator fame(w);
    OrderBuilder builder(w, fame);
    OrderReport rep = builder.build();

    std::ostringstream os;
    if (format == "tsv") {
        for (const ConsensusEntry& e : rep.settled)
            os << e.order_index << '\t' << to_hex(e.event) << '\t' << e.round_received << '\t'
               << e.consensus_ts << '\n';
    } else {
        for (const ConsensusEntry& e : rep.settled) {
            nlohmann::ordered_json j;
            j["id"] = to_hex(e.event);
            j["round_received"] = e.round_received;
            j["consensus_ts"] = e.consensus_ts;
            j["order_index"] = e.order_index;
            os << j.dump() << '\n';
        }
        for (const auto& [id, reason] : rep.unsettled) {
            nlohmann::ordered_json j;
            j["id"] = to_hex(id);
            j["unsettled"] = to_string(reason);
            os << j.dump() << '\n';
        }
        nlohmann::ordered_json summary;
        summary["settled_count"] = rep.settled.size();
        summary["unsettled_count"] = rep.unsettled.size();
        summary["max_round"] = rep.max_round;
        if (!rep.empty_ufw_rounds.empty()) summary["empty_ufw_rounds"] = rep.empty_ufw_rounds;
        os << summary.dump() << '\n';
    }

    if (explain) {
        // Election trace per witness candidate, in (round, id) order.
        std::vector<EventIndex> cands;
        for (std::uint32_t r = 0; r <= w.max_witness_round(); ++r)
            for (EventIndex x : w.witnesses_in_round(r)) cands.push_back(x);
        std::sort(cands.begin(), cands.end(), [&](EventIndex a, EventIndex b) {
            if (w.round_of_idx(a) != w.round_of_idx(b))
                return w.round_of_idx(a) < w.round_of_idx(b);
            return w.event_at(a).id < w.event_at(b).id;
        });
        for (EventIndex cand : cands) {
            const EventId id = w.event_at(cand).id;
            FameRecord rec = fame.fame(id);
            nlohmann::ordered_json j;
            j["candidate"] = to_hex(id);
            j["round"] = w.round_of_idx(cand);
            nlohmann::ordered_json tallies = nlohmann::ordered_json::array();
            for (const auto& rv : fame.vote_profile(id)) {
                nlohmann::ordered_json t;
                t["j"] = rv.round;
                t["t"] = rv.yes;
                t["f"] = rv.no;
                tallies.push_back(std::move(t));
            }
            j["tallies"] = std::move(tallies);
            j["decider"] = rec.decider ? nlohmann::ordered_json(to_hex(*rec.decider))
                                       : nlohmann::ordered_json(nullptr);
            j["beta"] = rec.famous ? nlohmann::ordered_json(*rec.famous)
                                   : nlohmann::ordered_json(nullptr);
            os << j.dump() << '\n';
        }
    }

    if (out_path.empty())
        std::cout << os.str();
    else
        write_file(out_path, os.str());
    return kExitOk;
}

int cmd_check(const std::string& log_path, std::int64_t peers, std::uint32_t d, std::uint32_t c,
              std::int64_t honest_count, bool quiet) {
    auto events = read_log_file(log_path);
    World w = world_from_events(events, log_params(events, peers, d, c));

    if (!quiet) {
        for (EventIndex i = 0; i < w.size(); ++i) {
            const Event& e = w.event_at(i);
            std::cout << to_hex(e.id) << '\t' << e.creator << '\t' << w.round_of_idx(i) << '\t'
                      << (w.is_witness_idx(i) ? 1 : 0) << '\n';
        }
    }

    CheckOptions opt;
    if (honest_count >= 0) {
        opt.honest.assign(w.params().n_peers, false);
        for (std::int64_t p = 0; p < honest_count && p < w.params().n_peers; ++p)
            opt.honest[p] = true;
    }

    bool ok = true;
    for (const CheckResult& r : run_checks(w, opt)) {
        if (r.pass) {
            std::cout << "[ok]   " << r.name << "\n";
        } else {
            std::cout << "[FAIL] " << r.name << ": " << r.detail << "\n";
            ok = false;
        }
    }
    return ok ? kExitOk : kExitViolation;
}

int cmd_export_dot(const std::string& log_path, std::int64_t peers, const std::string& out_path) {
    auto events = read_log_file(log_path);
    World w = world_from_events(events, log_params(events, peers, 1, 4));
    std::ostringstream os;
    write_dot(os, w);
    if (out_path.empty())
        std::cout << os.str();
    else
        write_file(out_path, os.str());
    return kExitOk;
}

int cmd_replay(const std::string& manifest_path, const std::string& out_path,
               const std::string& verify_path) {
    std::ifstream in(manifest_path);
    if (!in) throw LogParseError("cannot open manifest " + manifest_path);
    std::stringstream buf;
    buf << in.rdbuf();
    RunManifest m = manifest_from_json(buf.str());

    Simulation sim(m.config);
    sim.run();
    if (sim.steps() != m.steps || sim.spawn_log() != m.spawn_order) {
        std::cerr << "replay diverged from manifest\n";
        return kExitViolation;
    }

    std::string log = event_log_string(sim.global_world());
    if (!out_path.empty()) write_file(out_path, log);
    if (!verify_path.empty()) {
        std::ifstream orig(verify_path, std::ios::binary);
        if (!orig) throw LogParseError("cannot open log " + verify_path);
        std::stringstream ob;
        ob << orig.rdbuf();
        if (ob.str() != log) {
            std::cerr << "replayed log differs from " << verify_path << "\n";
            return kExitViolation;
        }
        std::cout << "replay matches " << verify_path << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hashgraph consensus engine and gossip simulator"};
    app.require_subcommand(1);

    SimFlags sim_flags;
    std::string sim_out = "events.jsonl";
    std::string sim_manifest = "manifest.json";
    auto* simulate = app.add_subcommand("simulate", "run a seeded gossip simulation");
    add_sim_flags(simulate, sim_flags);
    simulate->add_option("--out", sim_out, "event log output path");
    simulate->add_option("--manifest", sim_manifest, "run manifest output path");

    std::string log_path, out_path, format = "jsonl";
    std::int64_t peers = -1, honest_count = -1;
    std::uint32_t d = 1, c = 4;
    bool explain = false, quiet = false;
    auto* order = app.add_subcommand("order", "compute the consensus order of an event log");
    order->add_option("--log", log_path, "event log (jsonl)")->required();
    order->add_option("--peers", peers, "peer count (default: inferred)");
    order->add_option("--d", d, "first regular voting round offset");
    order->add_option("--c", c, "coin round frequency");
    order->add_option("--format", format, "jsonl | tsv")
        ->check(CLI::IsMember({"jsonl", "tsv"}));
    order->add_flag("--explain", explain, "append per-candidate election traces");
    order->add_option("--out", out_path, "write report here instead of stdout");
    order->set_config("--config", "", "flat key=value config file; flags override");

    auto* check = app.add_subcommand("check", "run the invariant suites over an event log");
    check->add_option("--log", log_path, "event log (jsonl)")->required();
    check->add_option("--peers", peers, "peer count (default: inferred)");
    check->add_option("--d", d, "first regular voting round offset");
    check->add_option("--c", c, "coin round frequency");
    check->add_option("--honest", honest_count, "honest peer count (default: all)");
    check->add_flag("--quiet", quiet, "suppress the per-event report rows");
    check->set_config("--config", "", "flat key=value config file; flags override");

    auto* dot = app.add_subcommand("export-dot", "render an event log as a DOT digraph");
    dot->add_option("--log", log_path, "event log (jsonl)")->required();
    dot->add_option("--peers", peers, "peer count (default: inferred)");
    dot->add_option("--out", out_path, "write DOT here instead of stdout");

    std::string manifest_path, verify_path;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and reproduce its log");
    replay->add_option("--manifest", manifest_path, "run manifest (json)")->required();
    replay->add_option("--out", out_path, "write the replayed log here");
    replay->add_option("--verify", verify_path, "compare the replayed log against this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(sim_flags, sim_out, sim_manifest);
        if (order->parsed()) return cmd_order(log_path, peers, d, c, format, explain, out_path);
        if (check->parsed()) return cmd_check(log_path, peers, d, c, honest_count, quiet);
        if (dot->parsed()) return cmd_export_dot(log_path, peers, out_path);
        if (replay->parsed()) return cmd_replay(manifest_path, out_path, verify_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const LogParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InsertException& e) {
        std::cerr << "input error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
