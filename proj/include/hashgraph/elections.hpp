#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hashgraph/world.hpp"

namespace hashgraph {

struct Tally {
    std::uint32_t yes = 0;
    std::uint32_t no = 0;
    std::uint32_t electors() const { return yes + no; }
};

struct FameRecord {
    EventId candidate{};
    std::optional<bool> famous;
    std::optional<EventId> decider;
    std::optional<std::uint32_t> decision_round;
};

// Virtual-voting evaluator over one immutable world snapshot. Votes and
// decisions are memoized per (candidate, voter); evaluation walks voter
// rounds upward from the candidate's round, so no recursion depth depends
// on the graph size. Do not mutate the world while an evaluator is live.
class FameEvaluator {
public:
    explicit FameEvaluator(const World& w);

    const World& world() const { return w_; }

    // Round-n witness w that sends votes to y (w strongly seen by y).
    bool elector(std::uint32_t n, const EventId& w, const EventId& y) const;

    // Yeas/nays on `candidate` among the round-n electors of `voter`.
    Tally election_tally(const EventId& candidate, std::uint32_t n, const EventId& voter);

    // The voter's vote on the candidate's fame. Defined for witness pairs
    // with round(candidate) < round(voter).
    bool vote(const EventId& candidate, const EventId& voter);

    // Some(beta) when the voter's round permits deciding and its tally is a
    // supermajority; None otherwise.
    std::optional<bool> decide(const EventId& candidate, const EventId& voter);

    // First decision in (round, id) scan order; famous is nullopt when no
    // witness in this world decides.
    FameRecord fame(const EventId& candidate);

    // For each peer with at least one famous round-i witness, the famous
    // witness with the smallest id. nullopt while any round-i witness has
    // undecided fame.
    std::optional<std::map<PeerId, EventId>> unique_famous_witnesses(std::uint32_t round);

    // Aggregate vote split per voting round, for reports and golden files.
    struct RoundVotes {
        std::uint32_t round;
        std::uint32_t yes;
        std::uint32_t no;
    };
    std::vector<RoundVotes> vote_profile(const EventId& candidate);

private:
    struct CandidateState {
        std::unordered_map<EventIndex, bool> votes; // witness -> vote
        std::uint32_t votes_filled_to = 0;          // witness rounds <= this are filled
        bool fame_scanned = false;
        FameRecord record;
    };

    CandidateState& state_for(EventIndex cand);
    void ensure_votes(EventIndex cand, CandidateState& st, std::uint32_t up_to_round);
    Tally tally_idx(EventIndex cand, CandidateState& st, std::uint32_t n, EventIndex voter);
    EventIndex require_witness(const EventId& id, const char* role) const;

    const World& w_;
    std::unordered_map<EventIndex, CandidateState> candidates_;
};

} // namespace hashgraph
