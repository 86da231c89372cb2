#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "hashgraph/world.hpp"

namespace hashgraph {

struct AdversarySpec {
    enum class Kind { forker, equivocator, delayer };

    Kind kind = Kind::forker;
    PeerId peer = 0;
    std::uint32_t branches = 2;  // forker: parallel self-chains
    std::uint64_t max_delay = 4; // delayer: max in-flight delay in steps
};

struct SyncPolicy {
    enum class Kind { uniform, skewed, scripted };

    Kind kind = Kind::uniform;
    std::vector<std::uint64_t> weights;                  // skewed: per-peer sender weight
    std::vector<std::pair<PeerId, PeerId>> trace;        // scripted: explicit (sender, receiver)
};

struct StopCondition {
    std::uint64_t max_steps = 100000;
    std::optional<std::uint32_t> target_round;
};

struct SimConfig {
    ProtocolParams params;
    std::vector<PeerId> honest;    // empty means all peers honest
    std::uint64_t seed = 1;
    SyncPolicy policy;
    std::uint64_t fairness_window = 0; // 0 picks the default 8 * N^2
    std::optional<AdversarySpec> adversary;
    StopCondition stop;

    std::vector<bool> honest_mask() const;
    std::uint64_t effective_window() const;
    void validate() const; // throws ConfigError
};

// Seeded multi-peer gossip simulator. One global step sequence defines the
// spawn order; the whole trajectory is a pure function of the config. Each
// sync makes the receiver create exactly one event, so the spawn log is the
// initial events followed by one event per completed sync.
class Simulation {
public:
    explicit Simulation(SimConfig cfg);

    // Deliver sender's current tip to receiver and let receiver create one
    // event. Throws SelfSync when sender == receiver. A delayer sender
    // enqueues instead; the delivery lands a bounded number of steps later.
    void sync(PeerId sender, PeerId receiver);

    // One scheduler step: release due delayed syncs, then run one sync with
    // the pair forced by the fairness window or drawn from the policy.
    // Returns false when the run has stopped.
    bool step();

    void run();
    bool stopped() const;

    const World& global_world() const { return global_; }
    const World& local_world(PeerId p) const { return locals_.at(p); }
    const std::vector<EventId>& spawn_log() const { return spawn_log_; }
    std::uint64_t steps() const { return step_count_; }
    const SimConfig& config() const { return cfg_; }

private:
    EventId shown_tip(PeerId sender, PeerId receiver);
    void deliver(PeerId sender, const EventId& shown, PeerId receiver);
    void create_event(PeerId creator, const EventId& self_parent, const EventId& other_parent);
    std::optional<std::pair<PeerId, PeerId>> forced_pair() const;
    std::pair<PeerId, PeerId> policy_pair();
    std::uint64_t rand_below(std::uint64_t n);
    std::size_t pair_slot(PeerId a, PeerId b) const { return a * cfg_.params.n_peers + b; }

    SimConfig cfg_;
    std::vector<bool> honest_;
    std::uint64_t window_;
    World global_;
    std::vector<World> locals_;
    std::vector<std::vector<EventId>> tips_; // one tip per peer, or one per forker branch
    std::vector<std::uint64_t> clocks_;
    std::vector<EventId> spawn_log_;
    std::unordered_map<EventId, std::uint64_t, DigestHash> spawn_index_;
    std::mt19937_64 rng_;
    std::uint64_t step_count_ = 0;
    std::vector<std::int64_t> last_sync_; // ordered honest pairs, last sync step

    struct PendingSync {
        std::uint64_t release_step;
        PeerId sender;
        EventId shown;
        PeerId receiver;
    };
    std::deque<PendingSync> pending_;
};

} // namespace hashgraph
