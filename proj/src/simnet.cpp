#include "hashgraph/simnet.hpp"

#include <algorithm>
#include <unordered_set>

namespace hashgraph {

std::vector<bool> SimConfig::honest_mask() const {
    std::vector<bool> mask(params.n_peers, honest.empty());
    for (PeerId p : honest)
        if (p < params.n_peers) mask[p] = true;
    return mask;
}

std::uint64_t SimConfig::effective_window() const {
    if (fairness_window) return fairness_window;
    return 8ull * params.n_peers * params.n_peers;
}

void SimConfig::validate() const {
    params.validate();
    for (PeerId p : honest)
        if (p >= params.n_peers) throw ConfigError("honest peer index out of range");

    const auto mask = honest_mask();
    std::uint32_t h = 0;
    for (bool b : mask) h += b;
    if (!supermajor(h, params.n_peers))
        throw ConfigError("honest peers must form a supermajority");

    if (adversary) {
        if (adversary->peer >= params.n_peers)
            throw ConfigError("adversary peer index out of range");
        if (mask[adversary->peer])
            throw ConfigError("adversary peer must not be in the honest set");
        if (adversary->kind == AdversarySpec::Kind::forker && adversary->branches < 2)
            throw ConfigError("forker needs at least 2 branches");
        if (adversary->kind == AdversarySpec::Kind::delayer) {
            if (adversary->max_delay < 1) throw ConfigError("delayer max_delay must be >= 1");
            if (adversary->max_delay >= effective_window())
                throw ConfigError("delayer max_delay must stay below the fairness window");
        }
    }

    switch (policy.kind) {
        case SyncPolicy::Kind::uniform:
            break;
        case SyncPolicy::Kind::skewed: {
            if (policy.weights.size() != params.n_peers)
                throw ConfigError("skewed policy needs one weight per peer");
            std::uint64_t total = 0;
            for (auto w : policy.weights) total += w;
            if (total == 0) throw ConfigError("skewed policy weights sum to zero");
            break;
        }
        case SyncPolicy::Kind::scripted:
            for (const auto& [s, r] : policy.trace) {
                if (s >= params.n_peers || r >= params.n_peers)
                    throw ConfigError("scripted trace peer out of range");
                if (s == r) throw ConfigError("scripted trace contains a self sync");
            }
            break;
    }

    // The forcing backstop needs slack for one forced pair per step.
    if (policy.kind != SyncPolicy::Kind::scripted) {
        std::uint64_t pairs = static_cast<std::uint64_t>(h) * (h - 1);
        if (effective_window() <= pairs)
            throw ConfigError("fairness window must exceed the number of ordered honest pairs");
    }
}

Simulation::Simulation(SimConfig cfg)
    : cfg_(std::move(cfg)),
      honest_(cfg_.honest_mask()),
      window_(cfg_.effective_window()),
      global_(cfg_.params),
      rng_(cfg_.seed) {
    cfg_.validate();

    const PeerId n = cfg_.params.n_peers;
    locals_.reserve(n);
    for (PeerId p = 0; p < n; ++p) locals_.emplace_back(cfg_.params);
    clocks_.assign(n, 0);
    tips_.resize(n);
    last_sync_.assign(static_cast<std::size_t>(n) * n, 0);

    for (PeerId p = 0; p < n; ++p) {
        Event e = Event::make(p, std::nullopt, std::nullopt, clocks_[p]++);
        global_.insert(e);
        locals_[p].insert(e);
        spawn_index_.emplace(e.id, spawn_log_.size());
        spawn_log_.push_back(e.id);
        std::uint32_t slots = 1;
        if (cfg_.adversary && cfg_.adversary->kind == AdversarySpec::Kind::forker &&
            cfg_.adversary->peer == p)
            slots = cfg_.adversary->branches;
        tips_[p].assign(slots, e.id);
    }
}

std::uint64_t Simulation::rand_below(std::uint64_t n) {
    return rng_() % n;
}

EventId Simulation::shown_tip(PeerId sender, PeerId receiver) {
    if (cfg_.adversary && cfg_.adversary->peer == sender) {
        switch (cfg_.adversary->kind) {
            case AdversarySpec::Kind::forker:
                return tips_[sender][receiver % cfg_.adversary->branches];
            case AdversarySpec::Kind::equivocator: {
                // Stale gossip for odd receivers: show the previous tip.
                const EventId& tip = tips_[sender][0];
                if (receiver % 2 == 1) {
                    const Event& e = global_.get(tip);
                    if (e.self_parent) return *e.self_parent;
                }
                return tip;
            }
            case AdversarySpec::Kind::delayer:
                return tips_[sender][0];
        }
    }
    return tips_[sender][0];
}

void Simulation::sync(PeerId sender, PeerId receiver) {
    if (sender == receiver) throw SelfSync("peer cannot sync with itself");
    EventId shown = shown_tip(sender, receiver);
    if (cfg_.adversary && cfg_.adversary->kind == AdversarySpec::Kind::delayer &&
        cfg_.adversary->peer == sender) {
        std::uint64_t delay = 1 + rand_below(cfg_.adversary->max_delay);
        pending_.push_back(PendingSync{step_count_ + delay, sender, shown, receiver});
        return;
    }
    deliver(sender, shown, receiver);
    if (honest_[sender] && honest_[receiver])
        last_sync_[pair_slot(sender, receiver)] = static_cast<std::int64_t>(step_count_);
}

void Simulation::deliver(PeerId sender, const EventId& shown, PeerId receiver) {
    World& local = locals_[receiver];

    if (!local.contains(shown)) {
        // Pull the shown event plus every missing ancestor, then insert in
        // spawn order so parents always land first.
        std::vector<std::pair<std::uint64_t, EventId>> missing;
        std::vector<EventId> stack{shown};
        std::unordered_set<EventId, DigestHash> queued{shown};
        while (!stack.empty()) {
            EventId id = stack.back();
            stack.pop_back();
            if (local.contains(id)) continue;
            missing.emplace_back(spawn_index_.at(id), id);
            const Event& e = global_.get(id);
            for (const auto& pid : {e.self_parent, e.other_parent}) {
                if (pid && !queued.count(*pid)) {
                    queued.insert(*pid);
                    stack.push_back(*pid);
                }
            }
        }
        std::sort(missing.begin(), missing.end());
        for (const auto& [ord, id] : missing) local.insert(global_.get(id));
    }

    std::uint32_t slot = 0;
    if (cfg_.adversary && cfg_.adversary->kind == AdversarySpec::Kind::forker &&
        cfg_.adversary->peer == receiver)
        slot = sender % cfg_.adversary->branches;
    create_event(receiver, tips_[receiver][slot], shown);
    tips_[receiver][slot] = spawn_log_.back();
}

void Simulation::create_event(PeerId creator, const EventId& self_parent,
                              const EventId& other_parent) {
    Event e = Event::make(creator, self_parent, other_parent, clocks_[creator]++);
    global_.insert(e);
    locals_[creator].insert(e);
    spawn_index_.emplace(e.id, spawn_log_.size());
    spawn_log_.push_back(e.id);
}

std::optional<std::pair<PeerId, PeerId>> Simulation::forced_pair() const {
    const PeerId n = cfg_.params.n_peers;
    std::uint64_t h = 0;
    for (bool b : honest_) h += b;
    const std::uint64_t pairs = h * (h - 1);
    if (pairs == 0) return std::nullopt;
    const std::uint64_t threshold = window_ - pairs;

    std::optional<std::pair<PeerId, PeerId>> best;
    std::int64_t best_last = 0;
    for (PeerId a = 0; a < n; ++a) {
        if (!honest_[a]) continue;
        for (PeerId b = 0; b < n; ++b) {
            if (a == b || !honest_[b]) continue;
            std::int64_t last = last_sync_[pair_slot(a, b)];
            std::uint64_t age = step_count_ - static_cast<std::uint64_t>(last);
            if (age >= threshold && (!best || last < best_last)) {
                best = std::make_pair(a, b);
                best_last = last;
            }
        }
    }
    return best;
}

std::pair<PeerId, PeerId> Simulation::policy_pair() {
    const PeerId n = cfg_.params.n_peers;
    PeerId sender = 0;
    switch (cfg_.policy.kind) {
        case SyncPolicy::Kind::uniform:
            sender = static_cast<PeerId>(rand_below(n));
            break;
        case SyncPolicy::Kind::skewed: {
            std::uint64_t total = 0;
            for (auto w : cfg_.policy.weights) total += w;
            std::uint64_t x = rand_below(total);
            for (PeerId p = 0; p < n; ++p) {
                if (x < cfg_.policy.weights[p]) {
                    sender = p;
                    break;
                }
                x -= cfg_.policy.weights[p];
            }
            break;
        }
        case SyncPolicy::Kind::scripted:
            return cfg_.policy.trace[step_count_];
    }
    PeerId receiver = static_cast<PeerId>(rand_below(n - 1));
    if (receiver >= sender) ++receiver;
    return {sender, receiver};
}

bool Simulation::stopped() const {
    if (step_count_ >= cfg_.stop.max_steps) return true;
    if (cfg_.stop.target_round && global_.max_round() >= *cfg_.stop.target_round) return true;
    if (cfg_.policy.kind == SyncPolicy::Kind::scripted &&
        step_count_ >= cfg_.policy.trace.size())
        return true;
    return false;
}

bool Simulation::step() {
    if (stopped()) return false;

    if (!pending_.empty()) {
        std::deque<PendingSync> keep;
        for (const PendingSync& p : pending_) {
            if (p.release_step <= step_count_)
                deliver(p.sender, p.shown, p.receiver);
            else
                keep.push_back(p);
        }
        pending_.swap(keep);
    }

    std::pair<PeerId, PeerId> pair;
    if (cfg_.policy.kind == SyncPolicy::Kind::scripted) {
        pair = cfg_.policy.trace[step_count_];
    } else if (auto forced = forced_pair()) {
        pair = *forced;
    } else {
        pair = policy_pair();
    }
    sync(pair.first, pair.second);
    ++step_count_;
    return true;
}

void Simulation::run() {
    while (step()) {
    }
}

} // namespace hashgraph
