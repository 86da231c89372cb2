#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hashgraph/bitset.hpp"
#include "hashgraph/errors.hpp"
#include "hashgraph/event.hpp"
#include "hashgraph/types.hpp"

namespace hashgraph {

// Ancestry-closed, append-only event store with the seeing relations and
// round assignment evaluated at insert time.
//
// Insertion order is a topological order (parents are required first), so
// per-event ancestor closures are unions of the parents' closures. Rounds
// are assigned once at insert and never change; relation queries are pure
// functions of the stored graph. Forks are stored freely -- honest
// fork-freeness is a checkable predicate (validate_world), not a storage
// constraint.
//
// Single-writer, multi-reader: all mutation goes through insert(); a world
// that is no longer being mutated is safe to share across readers.
class World {
public:
    explicit World(ProtocolParams params);

    const ProtocolParams& params() const { return params_; }
    std::size_t size() const { return events_.size(); }

    bool contains(const EventId& id) const { return index_.count(id) != 0; }
    EventIndex index_of(const EventId& id) const; // throws UnknownEvent
    const Event& event_at(EventIndex i) const { return events_[i]; }
    const Event& get(const EventId& id) const { return events_[index_of(id)]; }

    const std::vector<EventIndex>& by_creator(PeerId p) const { return by_creator_[p]; }
    const std::vector<EventIndex>& children_of(EventIndex i) const { return children_[i]; }

    EventIndex insert(Event e); // throws InsertException

    // x <= y: directed parent-path (possibly empty) from y back to x.
    bool is_ancestor(const EventId& x, const EventId& y) const;
    bool is_strict_ancestor(const EventId& x, const EventId& y) const;
    // x is reachable from y using only self-parent edges (reflexive).
    bool is_self_ancestor(const EventId& x, const EventId& y) const;
    // Same creator, neither a self-ancestor of the other.
    bool is_fork(const EventId& x, const EventId& y) const;
    // y sees x: x <= y and no fork by x's creator among y's ancestors.
    bool sees(const EventId& y, const EventId& x) const;
    // y strongly sees x: the creators of { z : x is seen by z, z <= y }
    // form a supermajority of all peers.
    bool strongly_sees(const EventId& y, const EventId& x) const;

    std::uint32_t round_of(const EventId& x) const;
    bool is_witness(const EventId& x) const;
    bool rwitness(std::uint32_t i, const EventId& x) const;
    const std::vector<EventIndex>& witnesses_in_round(std::uint32_t i) const;

    std::uint32_t max_round() const { return max_round_; }
    // Largest round holding a witness; 0 for an empty world.
    std::uint32_t max_witness_round() const;

    // Index-based fast paths used by the election/ordering layers and the
    // property audits.
    bool is_ancestor_idx(EventIndex x, EventIndex y) const { return anc_[y].test(x); }
    bool is_self_ancestor_idx(EventIndex x, EventIndex y) const { return self_anc_[y].test(x); }
    bool is_fork_idx(EventIndex x, EventIndex y) const;
    bool sees_idx(EventIndex y, EventIndex x) const;
    bool strongly_sees_idx(EventIndex y, EventIndex x) const;
    std::uint32_t round_of_idx(EventIndex i) const { return round_[i]; }
    bool is_witness_idx(EventIndex i) const { return witness_[i]; }

    const Bitset& ancestor_bits(EventIndex i) const { return anc_[i]; }
    const Bitset& self_ancestor_bits(EventIndex i) const { return self_anc_[i]; }
    const Bitset& creator_bits(PeerId p) const { return by_creator_bits_[p]; }
    // Events z that see x (lazily filled, extended as the world grows).
    const Bitset& seen_by_bits(EventIndex x) const;

    std::optional<EventIndex> self_parent_index(EventIndex i) const;
    std::optional<EventIndex> other_parent_index(EventIndex i) const;

private:
    std::uint32_t compute_round(EventIndex i) const;

    ProtocolParams params_;
    std::vector<Event> events_;
    std::unordered_map<EventId, EventIndex, DigestHash> index_;

    std::vector<Bitset> anc_;      // per event: ancestor closure incl. self
    std::vector<Bitset> self_anc_; // per event: self-parent chain incl. self
    std::vector<Bitset> fork_mask_; // per event: peers observed forking among ancestors

    std::vector<std::vector<EventIndex>> by_creator_;
    std::vector<Bitset> by_creator_bits_;
    std::vector<std::vector<EventIndex>> children_;

    std::vector<std::uint32_t> round_;
    std::vector<bool> witness_;
    std::vector<std::vector<EventIndex>> witnesses_by_round_;
    // round -> creator -> events of that round, oldest first
    std::vector<std::vector<std::vector<EventIndex>>> events_by_round_creator_;
    std::uint32_t max_round_ = 0;

    struct SeenEntry {
        Bitset bits;
        EventIndex filled = 0;
    };
    mutable std::vector<SeenEntry> seen_; // seen_[x].bits: events that see x
};

struct ForkViolation {
    PeerId creator;
    EventId a;
    EventId b;
    std::string describe() const;
};

// Honest peers must be fork-free (the world_forks clause). `honest[p]` marks
// peer p honest; peers beyond the vector are treated as honest.
std::optional<ForkViolation> validate_world(const World& w, const std::vector<bool>& honest);

} // namespace hashgraph
