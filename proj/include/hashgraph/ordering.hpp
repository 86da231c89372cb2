#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hashgraph/elections.hpp"
#include "hashgraph/world.hpp"

namespace hashgraph {

// Lower median: for an even count, the smaller of the two central elements,
// so the result is always a value some peer actually assigned.
std::uint64_t median_lower(std::vector<std::uint64_t> values);

enum class UnsettledReason {
    fame_pending,     // a relevant round has witnesses with undecided fame
    no_settled_round, // the world is too shallow to settle any relevant round
};

const char* to_string(UnsettledReason r);

struct ConsensusEntry {
    EventId event{};
    std::uint32_t round_received = 0;
    std::uint64_t consensus_ts = 0;
    std::uint64_t order_index = 0;
};

struct OrderReport {
    std::vector<ConsensusEntry> settled; // sorted by (round_received, ts, id)
    std::vector<std::pair<EventId, UnsettledReason>> unsettled; // sorted by id
    std::vector<std::uint32_t> empty_ufw_rounds; // settled rounds skipped for lack of UFWs
    std::uint32_t max_round = 0;
};

// Round received, consensus timestamps, and the total order, over one world
// snapshot. A round i counts as settled only when every round-i witness in
// the world has decided fame and the world holds a witness beyond round
// i + d, which bounds late-arriving round-i witnesses to unfamous.
class OrderBuilder {
public:
    OrderBuilder(const World& w, FameEvaluator& fame);

    bool round_settled(std::uint32_t i);

    // Earliest settled round whose unique famous witnesses are all
    // descendants of x; nullopt while that scan runs into unsettled rounds.
    std::optional<std::uint32_t> round_received(const EventId& x);

    // Timestamp of the earliest event on the witness's self-parent chain
    // that descends from x. Throws NotAnAncestor when x is not below ufw.
    std::uint64_t assigned_timestamp(const EventId& x, const EventId& ufw) const;

    std::optional<std::uint64_t> consensus_timestamp(const EventId& x);

    OrderReport build();

private:
    struct RoundInfo {
        bool settled = false;
        bool fame_gap = false;           // some witness fame undecided
        std::vector<EventIndex> ufw;     // valid when settled
    };
    struct Received {
        std::optional<std::uint32_t> round;
        UnsettledReason reason = UnsettledReason::no_settled_round;
    };

    const RoundInfo& round_info(std::uint32_t i);
    Received received_idx(EventIndex x);
    std::uint64_t assigned_ts_idx(EventIndex x, EventIndex ufw) const;
    std::uint64_t consensus_ts_idx(EventIndex x, const std::vector<EventIndex>& ufw) const;

    const World& w_;
    FameEvaluator& fame_;
    std::unordered_map<std::uint32_t, RoundInfo> rounds_;
    std::set<std::uint32_t> empty_ufw_rounds_;
};

} // namespace hashgraph
