#pragma once

#include <random>

#include "hashgraph/world.hpp"

namespace testsupport {

// Random ancestry-closed worlds with richer shapes than the simulator
// produces: other-parents may point at any older event, and a third of the
// seeds give the last peer a number of parallel self-chains.
struct FuzzSpec {
    std::uint64_t seed = 0;
    std::size_t max_events = 200;
    std::size_t min_events = 16;
};

struct FuzzWorld {
    hashgraph::World world;
    std::vector<bool> honest;
};

inline hashgraph::World fuzz_world(const FuzzSpec& spec) {
    using hashgraph::Event;
    using hashgraph::EventId;
    using hashgraph::PeerId;

    std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ull + 1);
    auto below = [&](std::uint64_t n) { return static_cast<std::uint64_t>(rng() % n); };

    hashgraph::ProtocolParams params;
    params.n_peers = static_cast<std::uint32_t>(2 + below(7)); // 2..8 peers
    hashgraph::World w(params);

    const bool forked = spec.seed % 3 == 0 && params.n_peers >= 3;
    const PeerId forker = params.n_peers - 1;
    const std::size_t branches = forked ? 2 + below(2) : 1;

    std::vector<std::vector<EventId>> tips(params.n_peers);
    std::vector<std::uint64_t> clocks(params.n_peers, 0);
    std::vector<std::vector<EventId>> by_creator(params.n_peers);

    for (PeerId p = 0; p < params.n_peers; ++p) {
        Event e = Event::make(p, std::nullopt, std::nullopt, clocks[p]++);
        w.insert(e);
        std::size_t slots = p == forker ? branches : 1;
        tips[p].assign(slots, e.id);
        by_creator[p].push_back(e.id);
    }

    const std::size_t target =
        spec.min_events + below(spec.max_events - spec.min_events + 1);
    while (w.size() < target) {
        PeerId creator = static_cast<PeerId>(below(params.n_peers));
        std::size_t slot = below(tips[creator].size());
        PeerId other = static_cast<PeerId>(below(params.n_peers - 1));
        if (other >= creator) ++other;
        // Other-parent: any event by `other`, biased towards recent ones.
        const auto& pool = by_creator[other];
        std::size_t pick = pool.size() - 1;
        if (pool.size() > 1 && below(3) == 0) pick = below(pool.size());
        Event e = Event::make(creator, tips[creator][slot], pool[pick], clocks[creator]++);
        w.insert(e);
        tips[creator][slot] = e.id;
        by_creator[creator].push_back(e.id);
    }
    return w;
}

inline FuzzWorld fuzz_world_with_mask(const FuzzSpec& spec) {
    hashgraph::World w = fuzz_world(spec);
    std::vector<bool> honest(w.params().n_peers, true);
    if (spec.seed % 3 == 0 && w.params().n_peers >= 3) honest.back() = false;
    return FuzzWorld{std::move(w), std::move(honest)};
}

} // namespace testsupport
