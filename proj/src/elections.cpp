#include "hashgraph/elections.hpp"

#include <algorithm>
#include <stdexcept>

namespace hashgraph {

FameEvaluator::FameEvaluator(const World& w) : w_(w) {}

EventIndex FameEvaluator::require_witness(const EventId& id, const char* role) const {
    EventIndex i = w_.index_of(id);
    if (!w_.is_witness_idx(i))
        throw NotAWitness(std::string(role) + " is not a witness: " + short_hex(id));
    return i;
}

bool FameEvaluator::elector(std::uint32_t n, const EventId& w, const EventId& y) const {
    return w_.rwitness(n, w) && w_.strongly_sees(y, w);
}

FameEvaluator::CandidateState& FameEvaluator::state_for(EventIndex cand) {
    auto [it, fresh] = candidates_.try_emplace(cand);
    if (fresh) {
        it->second.votes_filled_to = w_.round_of_idx(cand);
        it->second.record.candidate = w_.event_at(cand).id;
    }
    return it->second;
}

void FameEvaluator::ensure_votes(EventIndex cand, CandidateState& st, std::uint32_t up_to_round) {
    const std::uint32_t i = w_.round_of_idx(cand);
    const std::uint32_t d = w_.params().d;
    const std::uint32_t c = w_.params().c;
    const std::uint32_t n_peers = w_.params().n_peers;

    for (std::uint32_t j = st.votes_filled_to + 1; j <= up_to_round; ++j) {
        for (EventIndex v : w_.witnesses_in_round(j)) {
            bool val;
            if (j <= i + d) {
                // First voting rounds: yes iff the candidate is an ancestor.
                val = w_.is_ancestor_idx(cand, v);
            } else {
                Tally t;
                for (EventIndex w : w_.witnesses_in_round(j - 1)) {
                    if (!w_.strongly_sees_idx(v, w)) continue;
                    (st.votes.at(w) ? t.yes : t.no)++;
                }
                if ((j - i) % c != 0) {
                    val = t.yes >= t.no;
                } else {
                    const bool yes_super = supermajor(t.yes, n_peers);
                    const bool no_super = supermajor(t.no, n_peers);
                    if (yes_super && no_super)
                        throw std::logic_error("double supermajority in a coin round");
                    if (yes_super)
                        val = true;
                    else if (no_super)
                        val = false;
                    else
                        val = coin(w_.event_at(v));
                }
            }
            st.votes.emplace(v, val);
        }
        st.votes_filled_to = j;
    }
}

Tally FameEvaluator::tally_idx(EventIndex cand, CandidateState& st, std::uint32_t n,
                               EventIndex voter) {
    ensure_votes(cand, st, n);
    Tally t;
    for (EventIndex w : w_.witnesses_in_round(n)) {
        if (!w_.strongly_sees_idx(voter, w)) continue;
        (st.votes.at(w) ? t.yes : t.no)++;
    }
    return t;
}

Tally FameEvaluator::election_tally(const EventId& candidate, std::uint32_t n,
                                    const EventId& voter) {
    EventIndex cand = require_witness(candidate, "candidate");
    EventIndex vtr = w_.index_of(voter);
    if (n <= w_.round_of_idx(cand))
        throw RoundOrderViolation("elector round must be later than the candidate's round");
    auto& st = state_for(cand);
    return tally_idx(cand, st, n, vtr);
}

bool FameEvaluator::vote(const EventId& candidate, const EventId& voter) {
    EventIndex cand = require_witness(candidate, "candidate");
    EventIndex vtr = require_witness(voter, "voter");
    const std::uint32_t i = w_.round_of_idx(cand);
    const std::uint32_t j = w_.round_of_idx(vtr);
    if (j <= i) throw RoundOrderViolation("voter round must be later than the candidate's round");
    auto& st = state_for(cand);
    ensure_votes(cand, st, j);
    return st.votes.at(vtr);
}

std::optional<bool> FameEvaluator::decide(const EventId& candidate, const EventId& voter) {
    EventIndex cand = require_witness(candidate, "candidate");
    EventIndex vtr = require_witness(voter, "voter");
    const std::uint32_t i = w_.round_of_idx(cand);
    const std::uint32_t j = w_.round_of_idx(vtr);
    if (j <= i + w_.params().d) return std::nullopt;
    if ((j - i) % w_.params().c == 0) return std::nullopt;
    auto& st = state_for(cand);
    Tally t = tally_idx(cand, st, j - 1, vtr);
    if (supermajor(t.yes, w_.params().n_peers)) return true;
    if (supermajor(t.no, w_.params().n_peers)) return false;
    return std::nullopt;
}

FameRecord FameEvaluator::fame(const EventId& candidate) {
    EventIndex cand = require_witness(candidate, "candidate");
    auto& st = state_for(cand);
    if (st.fame_scanned) return st.record;

    const std::uint32_t i = w_.round_of_idx(cand);
    const std::uint32_t d = w_.params().d;
    const std::uint32_t c = w_.params().c;
    const std::uint32_t max_round = w_.max_witness_round();

    for (std::uint32_t j = i + d + 1; j <= max_round && !st.record.famous; ++j) {
        if ((j - i) % c == 0) continue;
        std::vector<EventIndex> voters(w_.witnesses_in_round(j));
        std::sort(voters.begin(), voters.end(), [this](EventIndex a, EventIndex b) {
            return w_.event_at(a).id < w_.event_at(b).id;
        });
        for (EventIndex v : voters) {
            Tally t = tally_idx(cand, st, j - 1, v);
            std::optional<bool> beta;
            if (supermajor(t.yes, w_.params().n_peers))
                beta = true;
            else if (supermajor(t.no, w_.params().n_peers))
                beta = false;
            if (beta) {
                st.record.famous = beta;
                st.record.decider = w_.event_at(v).id;
                st.record.decision_round = j;
                break;
            }
        }
    }
    st.fame_scanned = true;
    return st.record;
}

std::optional<std::map<PeerId, EventId>> FameEvaluator::unique_famous_witnesses(
    std::uint32_t round) {
    std::map<PeerId, EventId> out;
    for (EventIndex w : w_.witnesses_in_round(round)) {
        FameRecord rec = fame(w_.event_at(w).id);
        if (!rec.famous) return std::nullopt;
        if (!*rec.famous) continue;
        const Event& e = w_.event_at(w);
        auto [it, fresh] = out.try_emplace(e.creator, e.id);
        if (!fresh && e.id < it->second) it->second = e.id;
    }
    return out;
}

std::vector<FameEvaluator::RoundVotes> FameEvaluator::vote_profile(const EventId& candidate) {
    EventIndex cand = require_witness(candidate, "candidate");
    auto& st = state_for(cand);
    const std::uint32_t i = w_.round_of_idx(cand);
    const std::uint32_t max_round = w_.max_witness_round();
    if (max_round > i) ensure_votes(cand, st, max_round);

    std::vector<RoundVotes> out;
    for (std::uint32_t j = i + 1; j <= max_round; ++j) {
        const auto& ws = w_.witnesses_in_round(j);
        if (ws.empty()) continue;
        RoundVotes rv{j, 0, 0};
        for (EventIndex v : ws) (st.votes.at(v) ? rv.yes : rv.no)++;
        out.push_back(rv);
    }
    return out;
}

} // namespace hashgraph
