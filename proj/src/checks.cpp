#include "hashgraph/checks.hpp"

#include <algorithm>

#include "hashgraph/oracle.hpp"

namespace hashgraph {

namespace {

std::string ev(const World& w, EventIndex i) {
    return short_hex(w.event_at(i).id);
}

std::uint32_t creators_in(const World& w, const Bitset& a, const Bitset& b) {
    std::uint32_t count = 0;
    for (PeerId p = 0; p < w.params().n_peers; ++p)
        if (Bitset::intersects3(a, b, w.creator_bits(p))) ++count;
    return count;
}

} // namespace

RelationTables::RelationTables(const World& w) : w_(w) {
    const EventIndex n = static_cast<EventIndex>(w.size());
    stsee_.resize(n);
    desc_.resize(n);
    strongly_seen_.resize(n);
    for (EventIndex y = 0; y < n; ++y) {
        stsee_[y].resize(n);
        w.ancestor_bits(y).for_each_set([&](std::size_t x) {
            desc_[x].resize(n);
            desc_[x].set(y);
            if (w.strongly_sees_idx(y, static_cast<EventIndex>(x))) {
                stsee_[y].set(x);
                strongly_seen_.set(x);
            }
        });
    }
}

std::optional<std::string> check_partial_order(const World& w) {
    const EventIndex n = static_cast<EventIndex>(w.size());
    for (EventIndex y = 0; y < n; ++y) {
        if (!w.is_ancestor_idx(y, y)) return "ancestor not reflexive at " + ev(w, y);
        bool bad = false;
        EventIndex bad_x = 0;
        w.ancestor_bits(y).for_each_set([&](std::size_t x) {
            if (bad) return;
            // transitivity: anc(x) within anc(y)
            if (!w.ancestor_bits(static_cast<EventIndex>(x)).is_subset_of(w.ancestor_bits(y))) {
                bad = true;
                bad_x = static_cast<EventIndex>(x);
            }
            // antisymmetry
            if (x != y && w.is_ancestor_idx(y, static_cast<EventIndex>(x))) {
                bad = true;
                bad_x = static_cast<EventIndex>(x);
            }
        });
        if (bad)
            return "partial order violated between " + ev(w, bad_x) + " and " + ev(w, y);
    }
    return std::nullopt;
}

std::optional<std::string> check_supermajority_identities(std::uint64_t up_to_total) {
    for (std::uint64_t n = 0; n <= up_to_total; ++n) {
        for (std::uint64_t m = 0; m <= n; ++m) {
            if (superminor(m, n) != !supermajor(n - m, n))
                return "superminor/supermajor identity fails at m=" + std::to_string(m) +
                       " n=" + std::to_string(n);
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_lemma1(const World& w, const RelationTables& t) {
    const EventIndex n = static_cast<EventIndex>(w.size());
    for (EventIndex z = 0; z < n; ++z) {
        std::optional<std::string> fail;
        // (1) strongly seeing implies strict ancestor
        t.stsee(z).for_each_set([&](std::size_t x) {
            if (fail) return;
            if (x == z || !w.is_ancestor_idx(static_cast<EventIndex>(x), z))
                fail = "lemma1(1): " + ev(w, z) + " strongly sees non-strict-ancestor " +
                       ev(w, static_cast<EventIndex>(x));
        });
        if (fail) return fail;
        // (2) x self-ancestor of y and y strongly seen  =>  x strongly seen
        t.stsee(z).for_each_set([&](std::size_t y) {
            if (fail) return;
            if (!w.self_ancestor_bits(static_cast<EventIndex>(y)).is_subset_of(t.stsee(z)))
                fail = "lemma1(2): self-ancestors of " + ev(w, static_cast<EventIndex>(y)) +
                       " not all strongly seen by " + ev(w, z);
        });
        if (fail) return fail;
        // (3) x strongly seen by y and y <= z  =>  x strongly seen by z
        w.ancestor_bits(z).for_each_set([&](std::size_t y) {
            if (fail) return;
            if (!t.stsee(static_cast<EventIndex>(y)).is_subset_of(t.stsee(z)))
                fail = "lemma1(3): strongly-seen set of " + ev(w, static_cast<EventIndex>(y)) +
                       " not kept by descendant " + ev(w, z);
        });
        if (fail) return fail;
    }
    return std::nullopt;
}

std::optional<std::string> check_lemma2(const World& w, const RelationTables& t,
                                        const std::vector<bool>& honest) {
    if (validate_world(w, honest))
        return std::nullopt; // premise (honest fork-freeness) does not hold
    for (PeerId p = 0; p < w.params().n_peers; ++p) {
        const auto& events = w.by_creator(p);
        for (std::size_t i = 0; i < events.size(); ++i) {
            for (std::size_t j = i + 1; j < events.size(); ++j) {
                if (!w.is_fork_idx(events[i], events[j])) continue;
                if (t.strongly_seen_by_any(events[i]) && t.strongly_seen_by_any(events[j]))
                    return "lemma2: both sides of fork " + ev(w, events[i]) + "/" +
                           ev(w, events[j]) + " are strongly seen";
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_round_invariants(const World& w, const RelationTables& t,
                                                  const std::vector<bool>& honest) {
    const EventIndex n = static_cast<EventIndex>(w.size());
    const std::uint32_t n_peers = w.params().n_peers;

    for (EventIndex x = 0; x < n; ++x) {
        const std::uint32_t r = w.round_of_idx(x);
        auto sp = w.self_parent_index(x);
        auto op = w.other_parent_index(x);
        if (!sp) {
            if (r != 0) return "initial event " + ev(w, x) + " not in round 0";
        } else {
            std::uint32_t pm = std::max(w.round_of_idx(*sp), w.round_of_idx(*op));
            if (r < pm || r > pm + 1)
                return "round of " + ev(w, x) + " outside [max parent, max parent + 1]";
        }

        // monotonicity along ancestry
        bool bad = false;
        w.ancestor_bits(x).for_each_set([&](std::size_t a) {
            if (w.round_of_idx(static_cast<EventIndex>(a)) > r) bad = true;
        });
        if (bad) return "round not monotone into " + ev(w, x);

        // Lemma 4: for every i below x's round, x strongly sees round-i
        // witnesses on a supermajority of peers.
        for (std::uint32_t i = 0; i < r; ++i) {
            std::vector<bool> seen_creator(n_peers, false);
            for (EventIndex wit : w.witnesses_in_round(i))
                if (t.stsee(x).test(wit)) seen_creator[w.event_at(wit).creator] = true;
            std::uint32_t count = 0;
            for (bool b : seen_creator) count += b;
            if (!supermajor(count, n_peers))
                return "lemma4: " + ev(w, x) + " (round " + std::to_string(r) +
                       ") lacks supermajor round-" + std::to_string(i) + " witnesses";
        }
    }

    // Lemma 5: a supermajor set of w with x <= w and w strongly seen by y
    // forces round(y) > round(x).
    for (EventIndex y = 0; y < n; ++y) {
        for (EventIndex x = 0; x < n; ++x) {
            std::uint32_t count = creators_in(w, t.desc(x), t.stsee(y));
            if (supermajor(count, n_peers) && w.round_of_idx(y) <= w.round_of_idx(x))
                return "lemma5: " + ev(w, y) + " should outround " + ev(w, x);
        }
    }

    // Per honest creator, at most one witness per round.
    for (PeerId p = 0; p < n_peers; ++p) {
        if (p < honest.size() && !honest[p]) continue;
        std::vector<std::uint32_t> seen_rounds;
        for (EventIndex e : w.by_creator(p)) {
            if (!w.is_witness_idx(e)) continue;
            std::uint32_t r = w.round_of_idx(e);
            if (std::find(seen_rounds.begin(), seen_rounds.end(), r) != seen_rounds.end())
                return "honest peer " + std::to_string(p) + " has two witnesses in round " +
                       std::to_string(r);
            seen_rounds.push_back(r);
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_election_invariants(const World& w, const RelationTables& t,
                                                     FameEvaluator& fame) {
    const std::uint32_t d = w.params().d;
    const std::uint32_t c = w.params().c;
    const std::uint32_t max_round = w.max_witness_round();

    std::vector<EventIndex> witnesses;
    for (std::uint32_t r = 0; r <= max_round; ++r)
        for (EventIndex x : w.witnesses_in_round(r)) witnesses.push_back(x);

    for (EventIndex cand : witnesses) {
        const EventId cand_id = w.event_at(cand).id;
        const std::uint32_t i = w.round_of_idx(cand);

        std::optional<bool> first_beta;
        std::optional<std::uint32_t> first_decision_round;

        for (std::uint32_t j = i + 1; j <= max_round; ++j) {
            std::optional<bool> round_beta;
            for (EventIndex v : w.witnesses_in_round(j)) {
                const EventId voter_id = w.event_at(v).id;
                bool vt = fame.vote(cand_id, voter_id);

                // Lemma 10: yes votes come from descendants only.
                if (vt && !w.is_ancestor_idx(cand, v))
                    return "lemma10: " + ev(w, v) + " votes yes on non-ancestor " +
                           ev(w, cand);

                if (j > i + d) {
                    // Tally conservation against an independent elector count.
                    Tally tl = fame.election_tally(cand_id, j - 1, voter_id);
                    std::uint32_t electors = 0;
                    for (EventIndex wit : w.witnesses_in_round(j - 1))
                        if (t.stsee(v).test(wit)) ++electors;
                    if (tl.electors() != electors)
                        return "tally conservation: t+f=" + std::to_string(tl.electors()) +
                               " but " + std::to_string(electors) + " electors for voter " +
                               ev(w, v);
                }

                std::optional<bool> dec = fame.decide(cand_id, voter_id);
                if (dec) {
                    round_beta = round_beta ? round_beta : dec;
                    if (*round_beta != *dec)
                        return "conflicting decisions on " + ev(w, cand) + " in round " +
                               std::to_string(j);
                    if (first_beta && *first_beta != *dec)
                        return "consistency: conflicting decisions on " + ev(w, cand);
                    if (!first_beta) {
                        first_beta = dec;
                        first_decision_round = j;
                    }

                    // No Late Fame: a non-ancestor candidate at a deciding
                    // round must be decided no.
                    if (!w.is_ancestor_idx(cand, v) && *dec != false)
                        return "no-late-fame: " + ev(w, v) + " decided yes on non-ancestor " +
                               ev(w, cand);
                }
            }

            // Lemma 8: a decision in round j forces every round-j vote.
            if (round_beta) {
                for (EventIndex y : w.witnesses_in_round(j)) {
                    if (fame.vote(cand_id, w.event_at(y).id) != *round_beta)
                        return "lemma8: vote of " + ev(w, y) + " disagrees with round-" +
                               std::to_string(j) + " decision on " + ev(w, cand);
                }
            }
        }

        // Propagation: after the first decision, every witness in every
        // non-coin round decides the same way.
        if (first_beta) {
            for (std::uint32_t j = *first_decision_round + 1; j <= max_round; ++j) {
                if ((j - i) % c == 0) continue;
                for (EventIndex v : w.witnesses_in_round(j)) {
                    std::optional<bool> dec = fame.decide(cand_id, w.event_at(v).id);
                    if (!dec || *dec != *first_beta)
                        return "propagation: " + ev(w, v) + " fails to re-decide " +
                               ev(w, cand) + " in round " + std::to_string(j);
                }
            }
        }

        // No Late Fame, quantified over all valid decider rounds.
        for (std::uint32_t j = i + d + 1; j <= max_round; ++j) {
            if ((j - i) % c == 0) continue;
            for (EventIndex v : w.witnesses_in_round(j)) {
                if (w.is_ancestor_idx(cand, v)) continue;
                std::optional<bool> dec = fame.decide(cand_id, w.event_at(v).id);
                if (!dec || *dec != false)
                    return "no-late-fame: " + ev(w, v) + " does not decide no on " +
                           ev(w, cand);
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_ordering_invariants(const World& w, FameEvaluator& fame) {
    OrderBuilder builder(w, fame);
    OrderReport rep = builder.build();

    if (rep.settled.size() + rep.unsettled.size() != w.size())
        return "order report does not cover the world";

    for (std::size_t k = 0; k < rep.settled.size(); ++k) {
        const ConsensusEntry& e = rep.settled[k];
        if (e.order_index != k) return "order_index not dense at " + std::to_string(k);
        if (k > 0) {
            const ConsensusEntry& p = rep.settled[k - 1];
            auto key = [](const ConsensusEntry& x) {
                return std::make_tuple(x.round_received, x.consensus_ts, x.event);
            };
            if (!(key(p) < key(e))) return "settled entries not strictly ordered";
        }
        EventIndex i = w.index_of(e.event);
        if (e.round_received < w.round_of_idx(i))
            return "round_received below round for " + ev(w, i);

        // Timestamp comes from some unique famous witness.
        auto ufw = fame.unique_famous_witnesses(e.round_received);
        if (!ufw) return "settled entry in unsettled round";
        bool found = false;
        for (const auto& [peer, id] : *ufw)
            if (builder.assigned_timestamp(e.event, id) == e.consensus_ts) found = true;
        if (!found) return "consensus timestamp is nobody's assigned timestamp";
    }

    // Monotone along ancestry where both settled.
    std::unordered_map<EventIndex, std::uint32_t> rr;
    for (const ConsensusEntry& e : rep.settled) rr.emplace(w.index_of(e.event), e.round_received);
    for (const auto& [yi, yr] : rr) {
        for (const auto& [xi, xr] : rr) {
            if (xi != yi && w.is_ancestor_idx(xi, yi) && xr > yr)
                return "round_received not monotone from " + ev(w, xi) + " to " + ev(w, yi);
        }
    }
    return std::nullopt;
}

std::optional<std::string> check_oracle_equivalence(const World& w, std::size_t pair_cap) {
    const EventIndex n = static_cast<EventIndex>(w.size());
    if (n == 0) return std::nullopt;
    const std::size_t total = static_cast<std::size_t>(n) * n;
    const std::size_t stride = std::max<std::size_t>(1, total / std::max<std::size_t>(1, pair_cap));

    for (EventIndex y = 0; y < n; ++y) {
        const EventId& yid = w.event_at(y).id;
        for (EventIndex x = 0; x < n; ++x) {
            std::size_t flat = static_cast<std::size_t>(y) * n + x;
            if (!w.is_witness_idx(x) && flat % stride != 0) continue;
            const EventId& xid = w.event_at(x).id;
            if (w.strongly_sees(yid, xid) != strongly_sees_oracle(w, yid, xid))
                return "strongly_sees disagrees with oracle at y=" + ev(w, y) +
                       " x=" + ev(w, x);
        }
    }
    return std::nullopt;
}

std::vector<CheckResult> run_checks(const World& w, const CheckOptions& opt) {
    std::vector<CheckResult> out;
    auto add = [&](const std::string& name, std::optional<std::string> fail) {
        out.push_back(CheckResult{name, !fail, fail.value_or("")});
    };

    std::vector<bool> honest = opt.honest;
    if (honest.empty()) honest.assign(w.params().n_peers, true);

    auto fork = validate_world(w, honest);
    add("world-forks", fork ? std::optional<std::string>(fork->describe()) : std::nullopt);

    RelationTables tables(w);
    add("partial-order", check_partial_order(w));
    add("lemma-1", check_lemma1(w, tables));
    add("lemma-2", check_lemma2(w, tables, honest));
    add("round-invariants", check_round_invariants(w, tables, honest));

    FameEvaluator fame(w);
    add("election-invariants", check_election_invariants(w, tables, fame));
    add("ordering-invariants", check_ordering_invariants(w, fame));

    if (opt.oracle)
        add("oracle-equivalence", check_oracle_equivalence(w, opt.oracle_pair_cap));
    return out;
}

} // namespace hashgraph
