#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hashgraph/elections.hpp"
#include "hashgraph/ordering.hpp"
#include "hashgraph/world.hpp"

namespace hashgraph {

// Dense relation tables for whole-world property audits: the strongly-sees
// matrix, descendant closures, and the strongly-seen-by-anyone column.
class RelationTables {
public:
    explicit RelationTables(const World& w);

    const World& world() const { return w_; }
    const Bitset& stsee(EventIndex y) const { return stsee_[y]; } // bits x: y strongly sees x
    const Bitset& desc(EventIndex x) const { return desc_[x]; }   // bits y: x <= y
    bool strongly_seen_by_any(EventIndex x) const { return strongly_seen_.test(x); }

private:
    const World& w_;
    std::vector<Bitset> stsee_;
    std::vector<Bitset> desc_;
    Bitset strongly_seen_;
};

// Each audit returns the first counterexample, or nullopt when the
// property holds over the whole world.
std::optional<std::string> check_partial_order(const World& w);
std::optional<std::string> check_supermajority_identities(std::uint64_t up_to_total);
std::optional<std::string> check_lemma1(const World& w, const RelationTables& t);
std::optional<std::string> check_lemma2(const World& w, const RelationTables& t,
                                        const std::vector<bool>& honest);
std::optional<std::string> check_round_invariants(const World& w, const RelationTables& t,
                                                  const std::vector<bool>& honest);
std::optional<std::string> check_election_invariants(const World& w, const RelationTables& t,
                                                     FameEvaluator& fame);
std::optional<std::string> check_ordering_invariants(const World& w, FameEvaluator& fame);
std::optional<std::string> check_oracle_equivalence(const World& w, std::size_t pair_cap);

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct CheckOptions {
    std::vector<bool> honest;           // empty: all peers honest
    bool oracle = true;                 // include sampled oracle equivalence
    std::size_t oracle_pair_cap = 20000;
};

// The full log-checkable suite, one result per property family.
std::vector<CheckResult> run_checks(const World& w, const CheckOptions& opt);

} // namespace hashgraph
