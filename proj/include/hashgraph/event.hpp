#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hashgraph/types.hpp"

namespace hashgraph {

// Immutable DAG node. Initial events have neither parent; all other events
// have both. The id is the SHA-256 of the canonical serialization below and
// never stored separately from the body it commits to.
struct Event {
    EventId id{};
    PeerId creator = 0;
    std::optional<EventId> self_parent;
    std::optional<EventId> other_parent;
    std::uint64_t timestamp = 0; // creator's logical clock ticks
    std::vector<std::uint8_t> payload;

    bool is_initial() const { return !self_parent && !other_parent; }

    // Canonical serialization: creator (u32 BE), self_parent (32 bytes,
    // zero sentinel when absent), other_parent (same), timestamp (u64 BE),
    // payload length (u64 BE), payload bytes.
    std::vector<std::uint8_t> canonical_bytes() const;

    bool id_matches() const;

    static EventId compute_id(PeerId creator, const std::optional<EventId>& self_parent,
                              const std::optional<EventId>& other_parent, std::uint64_t timestamp,
                              std::span<const std::uint8_t> payload);

    static Event make(PeerId creator, std::optional<EventId> self_parent,
                      std::optional<EventId> other_parent, std::uint64_t timestamp,
                      std::vector<std::uint8_t> payload = {});
};

Digest sha256(std::span<const std::uint8_t> bytes);

// Pseudo-random coin: the middle bit of the event's digest (bit index 128,
// i.e. the most significant bit of byte 16).
bool coin(const Event& e);

} // namespace hashgraph
