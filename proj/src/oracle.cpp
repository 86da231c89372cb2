#include "hashgraph/oracle.hpp"

namespace hashgraph {

namespace {

// Upward reachability over parent edges, recomputed from the raw fields.
std::vector<char> ancestors_of(const World& w, EventIndex start) {
    std::vector<char> in(w.size(), 0);
    std::vector<EventIndex> stack{start};
    in[start] = 1;
    while (!stack.empty()) {
        EventIndex i = stack.back();
        stack.pop_back();
        const Event& e = w.event_at(i);
        for (const auto& pid : {e.self_parent, e.other_parent}) {
            if (!pid) continue;
            EventIndex p = w.index_of(*pid);
            if (!in[p]) {
                in[p] = 1;
                stack.push_back(p);
            }
        }
    }
    return in;
}

// Self-ancestor by chain walk. Insertion indices are topological, so the
// walk can stop once it passes below x.
bool self_ancestor_walk(const World& w, EventIndex x, EventIndex y) {
    EventIndex cur = y;
    for (;;) {
        if (cur == x) return true;
        if (cur < x) return false;
        const Event& e = w.event_at(cur);
        if (!e.self_parent) return false;
        cur = w.index_of(*e.self_parent);
    }
}

void mark_descendants(const std::vector<std::vector<EventIndex>>& kids, EventIndex from,
                      std::vector<char>& out) {
    std::vector<EventIndex> stack{from};
    out[from] = 1;
    while (!stack.empty()) {
        EventIndex i = stack.back();
        stack.pop_back();
        for (EventIndex k : kids[i]) {
            if (!out[k]) {
                out[k] = 1;
                stack.push_back(k);
            }
        }
    }
}

} // namespace

bool strongly_sees_oracle(const World& w, const EventId& yid, const EventId& xid) {
    const EventIndex y = w.index_of(yid);
    const EventIndex x = w.index_of(xid);
    const std::size_t n = w.size();

    std::vector<char> anc_y = ancestors_of(w, y);
    if (!anc_y[x]) return false;
    const PeerId cx = w.event_at(x).creator;

    // Child adjacency restricted to y's ancestry, rebuilt from parent fields.
    std::vector<std::vector<EventIndex>> kids(n);
    std::vector<EventIndex> by_cx;
    for (EventIndex i = 0; i < n; ++i) {
        if (!anc_y[i]) continue;
        const Event& e = w.event_at(i);
        if (e.self_parent) kids[w.index_of(*e.self_parent)].push_back(i);
        if (e.other_parent) kids[w.index_of(*e.other_parent)].push_back(i);
        if (e.creator == cx) by_cx.push_back(i);
    }

    // z such that x <= z <= y.
    std::vector<char> between(n, 0);
    mark_descendants(kids, x, between);

    // z is disqualified when its ancestry holds both sides of a fork by
    // x's creator, i.e. z descends from both elements of a fork pair.
    std::vector<char> contaminated(n, 0);
    for (std::size_t i = 0; i < by_cx.size(); ++i) {
        for (std::size_t j = i + 1; j < by_cx.size(); ++j) {
            EventIndex u = by_cx[i], v = by_cx[j];
            if (self_ancestor_walk(w, u, v) || self_ancestor_walk(w, v, u)) continue;
            std::vector<char> du(n, 0), dv(n, 0);
            mark_descendants(kids, u, du);
            mark_descendants(kids, v, dv);
            for (EventIndex z = 0; z < n; ++z)
                if (du[z] && dv[z]) contaminated[z] = 1;
        }
    }

    std::vector<char> creator_has(w.params().n_peers, 0);
    for (EventIndex z = 0; z < n; ++z)
        if (between[z] && !contaminated[z]) creator_has[w.event_at(z).creator] = 1;
    std::uint32_t count = 0;
    for (char c : creator_has) count += c;
    return supermajor(count, w.params().n_peers);
}

} // namespace hashgraph
