#include "hashgraph/ordering.hpp"

#include <algorithm>
#include <stdexcept>

namespace hashgraph {

std::uint64_t median_lower(std::vector<std::uint64_t> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty list");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

const char* to_string(UnsettledReason r) {
    switch (r) {
        case UnsettledReason::fame_pending: return "fame-pending";
        case UnsettledReason::no_settled_round: return "no-settled-round";
    }
    return "?";
}

OrderBuilder::OrderBuilder(const World& w, FameEvaluator& fame) : w_(w), fame_(fame) {}

const OrderBuilder::RoundInfo& OrderBuilder::round_info(std::uint32_t i) {
    auto it = rounds_.find(i);
    if (it != rounds_.end()) return it->second;

    RoundInfo info;
    std::optional<std::map<PeerId, EventId>> ufw;
    if (w_.max_witness_round() > i + w_.params().d) {
        ufw = fame_.unique_famous_witnesses(i);
        if (ufw) {
            info.settled = true;
            for (const auto& [peer, id] : *ufw) info.ufw.push_back(w_.index_of(id));
        } else {
            info.fame_gap = true;
        }
    }
    return rounds_.emplace(i, std::move(info)).first->second;
}

bool OrderBuilder::round_settled(std::uint32_t i) {
    return round_info(i).settled;
}

OrderBuilder::Received OrderBuilder::received_idx(EventIndex x) {
    for (std::uint32_t i = w_.round_of_idx(x);; ++i) {
        const RoundInfo& info = round_info(i);
        if (!info.settled) {
            return Received{std::nullopt, info.fame_gap ? UnsettledReason::fame_pending
                                                        : UnsettledReason::no_settled_round};
        }
        if (info.ufw.empty()) {
            // A settled round without famous witnesses cannot receive
            // anything; flagged rather than given semantics.
            empty_ufw_rounds_.insert(i);
            continue;
        }
        bool all = true;
        for (EventIndex u : info.ufw) {
            if (!w_.is_ancestor_idx(x, u)) {
                all = false;
                break;
            }
        }
        if (all) return Received{i, UnsettledReason::no_settled_round};
    }
}

std::optional<std::uint32_t> OrderBuilder::round_received(const EventId& x) {
    return received_idx(w_.index_of(x)).round;
}

std::uint64_t OrderBuilder::assigned_ts_idx(EventIndex x, EventIndex ufw) const {
    if (!w_.is_ancestor_idx(x, ufw))
        throw NotAnAncestor("event is not an ancestor of the witness");
    EventIndex cur = ufw;
    for (;;) {
        auto sp = w_.self_parent_index(cur);
        if (!sp || !w_.is_ancestor_idx(x, *sp)) break;
        cur = *sp;
    }
    return w_.event_at(cur).timestamp;
}

std::uint64_t OrderBuilder::assigned_timestamp(const EventId& x, const EventId& ufw) const {
    return assigned_ts_idx(w_.index_of(x), w_.index_of(ufw));
}

std::uint64_t OrderBuilder::consensus_ts_idx(EventIndex x,
                                             const std::vector<EventIndex>& ufw) const {
    std::vector<std::uint64_t> values;
    values.reserve(ufw.size());
    for (EventIndex u : ufw) values.push_back(assigned_ts_idx(x, u));
    return median_lower(std::move(values));
}

std::optional<std::uint64_t> OrderBuilder::consensus_timestamp(const EventId& x) {
    EventIndex xi = w_.index_of(x);
    Received r = received_idx(xi);
    if (!r.round) return std::nullopt;
    return consensus_ts_idx(xi, round_info(*r.round).ufw);
}

OrderReport OrderBuilder::build() {
    OrderReport rep;
    rep.max_round = w_.max_round();

    for (EventIndex i = 0; i < w_.size(); ++i) {
        Received r = received_idx(i);
        if (r.round) {
            ConsensusEntry entry;
            entry.event = w_.event_at(i).id;
            entry.round_received = *r.round;
            entry.consensus_ts = consensus_ts_idx(i, round_info(*r.round).ufw);
            rep.settled.push_back(entry);
        } else {
            rep.unsettled.emplace_back(w_.event_at(i).id, r.reason);
        }
    }

    std::sort(rep.settled.begin(), rep.settled.end(), [](const auto& a, const auto& b) {
        if (a.round_received != b.round_received) return a.round_received < b.round_received;
        if (a.consensus_ts != b.consensus_ts) return a.consensus_ts < b.consensus_ts;
        return a.event < b.event;
    });
    for (std::size_t i = 0; i < rep.settled.size(); ++i)
        rep.settled[i].order_index = i;
    std::sort(rep.unsettled.begin(), rep.unsettled.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    rep.empty_ufw_rounds.assign(empty_ufw_rounds_.begin(), empty_ufw_rounds_.end());
    return rep;
}

} // namespace hashgraph
