#include "hashgraph/world.hpp"

#include <algorithm>

namespace hashgraph {

World::World(ProtocolParams params) : params_(params) {
    params_.validate();
    by_creator_.resize(params_.n_peers);
    by_creator_bits_.resize(params_.n_peers);
}

EventIndex World::index_of(const EventId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UnknownEvent("unknown event " + to_hex(id));
    return it->second;
}

std::optional<EventIndex> World::self_parent_index(EventIndex i) const {
    const Event& e = events_[i];
    if (!e.self_parent) return std::nullopt;
    return index_.at(*e.self_parent);
}

std::optional<EventIndex> World::other_parent_index(EventIndex i) const {
    const Event& e = events_[i];
    if (!e.other_parent) return std::nullopt;
    return index_.at(*e.other_parent);
}

EventIndex World::insert(Event e) {
    if (!e.id_matches())
        throw InsertException(InsertError::bad_hash,
                              "id does not match event body: " + short_hex(e.id));
    if (index_.count(e.id))
        throw InsertException(InsertError::duplicate_id, "duplicate event " + short_hex(e.id));
    if (e.self_parent.has_value() != e.other_parent.has_value())
        throw InsertException(InsertError::invalid_parents,
                              "parents must be both present or both absent");
    if (e.creator >= params_.n_peers)
        throw InsertException(InsertError::invalid_parents,
                              "creator index out of range: " + std::to_string(e.creator));

    EventIndex sp_idx = 0, op_idx = 0;
    if (e.self_parent) {
        if (*e.self_parent == *e.other_parent)
            throw InsertException(InsertError::invalid_parents, "self parent equals other parent");
        auto sp = index_.find(*e.self_parent);
        if (sp == index_.end())
            throw InsertException(InsertError::missing_parent,
                                  "missing self parent " + short_hex(*e.self_parent));
        auto op = index_.find(*e.other_parent);
        if (op == index_.end())
            throw InsertException(InsertError::missing_parent,
                                  "missing other parent " + short_hex(*e.other_parent));
        sp_idx = sp->second;
        op_idx = op->second;
        if (events_[sp_idx].creator != e.creator)
            throw InsertException(InsertError::creator_mismatch,
                                  "self parent created by a different peer");
        if (events_[op_idx].creator == e.creator)
            throw InsertException(InsertError::creator_mismatch,
                                  "other parent created by the same peer");
    }

    const EventIndex idx = static_cast<EventIndex>(events_.size());
    const PeerId p = e.creator;
    index_.emplace(e.id, idx);
    events_.push_back(std::move(e));
    children_.emplace_back();

    // Closures: union of the parents' closures plus self.
    Bitset anc(idx + 1);
    Bitset self_anc(idx + 1);
    if (events_[idx].self_parent) {
        anc |= anc_[sp_idx];
        anc |= anc_[op_idx];
        self_anc |= self_anc_[sp_idx];
        children_[sp_idx].push_back(idx);
        children_[op_idx].push_back(idx);
    }
    anc.set(idx);
    self_anc.set(idx);
    anc_.push_back(std::move(anc));
    self_anc_.push_back(std::move(self_anc));

    by_creator_[p].push_back(idx);
    by_creator_bits_[p].set(idx);

    // A peer q is fork-observed by this event iff the events by q among its
    // ancestors do not form a single self-parent chain. The chain case is
    // exactly "every such event is a self-ancestor of the latest one".
    Bitset fm(params_.n_peers);
    for (PeerId q = 0; q < params_.n_peers; ++q) {
        const auto& byq = by_creator_[q];
        EventIndex latest = 0;
        bool found = false;
        for (auto it = byq.rbegin(); it != byq.rend(); ++it) {
            if (anc_[idx].test(*it)) {
                latest = *it;
                found = true;
                break;
            }
        }
        if (!found) continue;
        bool chain = true;
        for (EventIndex z : byq) {
            if (z != latest && anc_[idx].test(z) && !self_anc_[latest].test(z)) {
                chain = false;
                break;
            }
        }
        if (!chain) fm.set(q);
    }
    fork_mask_.push_back(std::move(fm));

    seen_.emplace_back();

    const std::uint32_t r = compute_round(idx);
    round_.push_back(r);
    max_round_ = std::max(max_round_, r);
    bool w = events_[idx].is_initial() || r > round_[sp_idx];
    witness_.push_back(w);
    if (static_cast<std::size_t>(r) >= events_by_round_creator_.size()) {
        events_by_round_creator_.resize(r + 1);
        witnesses_by_round_.resize(r + 1);
    }
    auto& per_creator = events_by_round_creator_[r];
    if (per_creator.empty()) per_creator.resize(params_.n_peers);
    per_creator[p].push_back(idx);
    if (w) witnesses_by_round_[r].push_back(idx);

    return idx;
}

std::uint32_t World::compute_round(EventIndex i) const {
    const Event& e = events_[i];
    if (e.is_initial()) return 0;
    const EventIndex sp = index_.at(*e.self_parent);
    const EventIndex op = index_.at(*e.other_parent);
    const std::uint32_t m = std::max(round_[sp], round_[op]);

    // Advance past m iff round-m events on a supermajority of peers are
    // strongly seen (any round-m event counts, not only witnesses).
    const auto& per_creator = events_by_round_creator_[m];
    std::uint32_t count = 0;
    for (PeerId a = 0; a < params_.n_peers && !per_creator.empty(); ++a) {
        for (EventIndex w : per_creator[a]) {
            if (strongly_sees_idx(i, w)) {
                ++count;
                break;
            }
        }
    }
    return supermajor(count, params_.n_peers) ? m + 1 : m;
}

bool World::is_ancestor(const EventId& x, const EventId& y) const {
    return is_ancestor_idx(index_of(x), index_of(y));
}

bool World::is_strict_ancestor(const EventId& x, const EventId& y) const {
    EventIndex xi = index_of(x), yi = index_of(y);
    return xi != yi && is_ancestor_idx(xi, yi);
}

bool World::is_self_ancestor(const EventId& x, const EventId& y) const {
    return is_self_ancestor_idx(index_of(x), index_of(y));
}

bool World::is_fork_idx(EventIndex x, EventIndex y) const {
    return events_[x].creator == events_[y].creator && !self_anc_[y].test(x) &&
           !self_anc_[x].test(y);
}

bool World::is_fork(const EventId& x, const EventId& y) const {
    return is_fork_idx(index_of(x), index_of(y));
}

bool World::sees_idx(EventIndex y, EventIndex x) const {
    return anc_[y].test(x) && !fork_mask_[y].test(events_[x].creator);
}

bool World::sees(const EventId& y, const EventId& x) const {
    return sees_idx(index_of(y), index_of(x));
}

const Bitset& World::seen_by_bits(EventIndex x) const {
    SeenEntry& entry = seen_[x];
    const EventIndex n = static_cast<EventIndex>(events_.size());
    if (entry.filled < n) {
        entry.bits.resize(n);
        const PeerId cx = events_[x].creator;
        for (EventIndex z = std::max(entry.filled, x); z < n; ++z)
            if (anc_[z].test(x) && !fork_mask_[z].test(cx)) entry.bits.set(z);
        entry.filled = n;
    }
    return entry.bits;
}

bool World::strongly_sees_idx(EventIndex y, EventIndex x) const {
    if (!anc_[y].test(x)) return false;
    const Bitset& seen = seen_by_bits(x);
    std::uint32_t count = 0;
    for (PeerId a = 0; a < params_.n_peers; ++a)
        if (Bitset::intersects3(seen, anc_[y], by_creator_bits_[a])) ++count;
    return supermajor(count, params_.n_peers);
}

bool World::strongly_sees(const EventId& y, const EventId& x) const {
    return strongly_sees_idx(index_of(y), index_of(x));
}

std::uint32_t World::round_of(const EventId& x) const {
    return round_[index_of(x)];
}

bool World::is_witness(const EventId& x) const {
    return witness_[index_of(x)];
}

bool World::rwitness(std::uint32_t i, const EventId& x) const {
    EventIndex xi = index_of(x);
    return witness_[xi] && round_[xi] == i;
}

const std::vector<EventIndex>& World::witnesses_in_round(std::uint32_t i) const {
    static const std::vector<EventIndex> empty;
    if (static_cast<std::size_t>(i) >= witnesses_by_round_.size()) return empty;
    return witnesses_by_round_[i];
}

std::uint32_t World::max_witness_round() const {
    for (std::size_t r = witnesses_by_round_.size(); r-- > 0;)
        if (!witnesses_by_round_[r].empty()) return static_cast<std::uint32_t>(r);
    return 0;
}

std::string ForkViolation::describe() const {
    return "honest peer " + std::to_string(creator) + " forked: " + short_hex(a) + " / " +
           short_hex(b);
}

std::optional<ForkViolation> validate_world(const World& w, const std::vector<bool>& honest) {
    for (PeerId p = 0; p < w.params().n_peers; ++p) {
        if (p < honest.size() && !honest[p]) continue;
        const auto& events = w.by_creator(p);
        for (std::size_t i = 0; i < events.size(); ++i) {
            for (std::size_t j = i + 1; j < events.size(); ++j) {
                if (w.is_fork_idx(events[i], events[j]))
                    return ForkViolation{p, w.event_at(events[i]).id, w.event_at(events[j]).id};
            }
        }
    }
    return std::nullopt;
}

} // namespace hashgraph
