#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hashgraph/checks.hpp"
#include "hashgraph/oracle.hpp"
#include "hashgraph/world.hpp"

#include "support/fig1.hpp"
#include "support/oracles.hpp"
#include "support/worldgen.hpp"

using namespace hashgraph;
using namespace testsupport;

TEST_CASE("sha256 matches the FIPS vector and ids commit to the body") {
    // SHA-256("abc")
    std::vector<std::uint8_t> abc{'a', 'b', 'c'};
    CHECK(to_hex(sha256(abc)) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    Event e = Event::make(2, std::nullopt, std::nullopt, 7, {0xde, 0xad});
    CHECK(e.id == sha256(e.canonical_bytes()));
    CHECK(e.id_matches());

    // Canonical layout: creator u32 BE, two 32-byte parent slots (zeros when
    // absent), ts u64 BE, payload length u64 BE, payload.
    auto bytes = e.canonical_bytes();
    REQUIRE(bytes.size() == 4 + 32 + 32 + 8 + 8 + 2);
    CHECK(bytes[3] == 2);
    CHECK(bytes[4 + 64 + 7] == 7);
    CHECK(bytes[4 + 64 + 8 + 7] == 2);
    CHECK(bytes[bytes.size() - 2] == 0xde);
}

TEST_CASE("insert accepts the worked graph and rejects invalid events") {
    ProtocolParams params;
    params.n_peers = 4;
    World w(params);

    Event a1 = Event::make(0, std::nullopt, std::nullopt, 0);
    w.insert(a1);
    CHECK(w.contains(a1.id));

    Event b1 = Event::make(1, std::nullopt, std::nullopt, 0);
    w.insert(b1);
    Event b2 = Event::make(1, b1.id, a1.id, 1);
    w.insert(b2);
    CHECK(w.size() == 3);

    SUBCASE("duplicate id") {
        CHECK_THROWS_AS(w.insert(b2), InsertException);
        try {
            w.insert(b2);
        } catch (const InsertException& e) {
            CHECK(e.code() == InsertError::duplicate_id);
        }
    }
    SUBCASE("missing parent") {
        Event ghost = Event::make(2, std::nullopt, std::nullopt, 0);
        Event orphan = Event::make(2, ghost.id, a1.id, 1);
        try {
            w.insert(orphan);
            FAIL("expected MissingParent");
        } catch (const InsertException& e) {
            CHECK(e.code() == InsertError::missing_parent);
        }
    }
    SUBCASE("bad hash") {
        Event tampered = Event::make(2, std::nullopt, std::nullopt, 0);
        tampered.timestamp = 99; // id no longer matches
        try {
            w.insert(tampered);
            FAIL("expected BadHash");
        } catch (const InsertException& e) {
            CHECK(e.code() == InsertError::bad_hash);
        }
    }
    SUBCASE("self parent created by a different peer") {
        Event bad = Event::make(2, a1.id, b1.id, 0);
        try {
            w.insert(bad);
            FAIL("expected CreatorMismatch");
        } catch (const InsertException& e) {
            CHECK(e.code() == InsertError::creator_mismatch);
        }
    }
    SUBCASE("other parent by the same peer") {
        Event bad = Event::make(1, b2.id, b1.id, 2);
        try {
            w.insert(bad);
            FAIL("expected CreatorMismatch");
        } catch (const InsertException& e) {
            CHECK(e.code() == InsertError::creator_mismatch);
        }
    }
    SUBCASE("one parent only") {
        Event bad;
        bad.creator = 2;
        bad.self_parent = std::nullopt;
        bad.other_parent = a1.id;
        bad.id = Event::compute_id(2, std::nullopt, a1.id, 0, {});
        try {
            w.insert(bad);
            FAIL("expected invalid parents");
        } catch (const InsertException& e) {
            CHECK(e.code() == InsertError::invalid_parents);
        }
    }
    SUBCASE("unknown event queries") {
        Event ghost = Event::make(3, std::nullopt, std::nullopt, 5);
        CHECK_THROWS_AS(w.is_ancestor(ghost.id, a1.id), UnknownEvent);
        CHECK_THROWS_AS(w.round_of(ghost.id), UnknownEvent);
    }
}

TEST_CASE("ancestor relations on the worked graph") {
    Fig1 g = build_fig1();
    const World& w = g.world;

    // Reflexivity and the paper's edge A1--B2.
    CHECK(w.is_ancestor(g["A1"], g["A1"]));
    CHECK(w.is_ancestor(g["A1"], g["B2"]));

    // A2's ancestor closure is {A1, B1, A2}; computed first by traversal.
    auto anc = oracle_ancestor_set(w, w.index_of(g["A2"]));
    std::size_t count = 0;
    for (char c : anc) count += c;
    CHECK(count == 3);
    CHECK(anc[w.index_of(g["A1"])]);
    CHECK(anc[w.index_of(g["B1"])]);
    CHECK_FALSE(w.is_ancestor(g["D1"], g["A2"]));

    CHECK_FALSE(w.is_strict_ancestor(g["A1"], g["A1"]));
    CHECK(w.is_strict_ancestor(g["A1"], g["B2"]));
    CHECK_FALSE(w.is_strict_ancestor(g["B5"], g["B1"]));

    CHECK(w.is_self_ancestor(g["B1"], g["B5"]));
    CHECK_FALSE(w.is_self_ancestor(g["A1"], g["B2"]));
    CHECK(w.is_self_ancestor(g["C2"], g["C2"]));
}

TEST_CASE("fixture file and direct construction agree byte for byte") {
    Fig1 built = build_fig1();
    Fig1 loaded = load_fig1();
    REQUIRE(built.world.size() == loaded.world.size());
    for (const auto& [label, id] : built.ids) CHECK(loaded[label] == id);
}

namespace {

// Minimal forked graph: two children of B1 with B1 as self-parent.
struct ForkedGraph {
    World world;
    EventId a1, b1, fork_a, fork_b;
};

ForkedGraph build_forked() {
    ProtocolParams params;
    params.n_peers = 2;
    World w(params);
    Event a1 = Event::make(0, std::nullopt, std::nullopt, 0);
    Event b1 = Event::make(1, std::nullopt, std::nullopt, 0);
    Event fa = Event::make(1, b1.id, a1.id, 1);
    Event fb = Event::make(1, b1.id, a1.id, 2);
    for (const Event& e : {a1, b1, fa, fb}) w.insert(e);
    return ForkedGraph{std::move(w), a1.id, b1.id, fa.id, fb.id};
}

} // namespace

TEST_CASE("fork detection") {
    Fig1 g = build_fig1();
    CHECK_FALSE(g.world.is_fork(g["B1"], g["B1"])); // no event forks with itself
    CHECK_FALSE(g.world.is_fork(g["B1"], g["B3"])); // self-ancestor chain

    ForkedGraph f = build_forked();
    // Definitional evaluation on the minimal graph first.
    CHECK(oracle_is_fork(f.world, f.fork_a, f.fork_b));
    CHECK(f.world.is_fork(f.fork_a, f.fork_b));
    CHECK(f.world.is_fork(f.fork_b, f.fork_a));
    CHECK_FALSE(f.world.is_fork(f.b1, f.fork_a));

    // validate_world flags the fork only when peer 1 is claimed honest.
    CHECK(validate_world(f.world, {true, true}).has_value());
    CHECK_FALSE(validate_world(f.world, {true, false}).has_value());
}

TEST_CASE("sees: ancestry filtered by fork blacklisting") {
    Fig1 g = build_fig1();
    CHECK(g.world.sees(g["B2"], g["A1"])); // every ancestor is seen, honest graph
    CHECK_FALSE(g.world.sees(g["A2"], g["D1"])); // not an ancestor

    // A peer descending from both sides of a fork sees nothing by the forker.
    ForkedGraph f = build_forked();
    Event a2 = Event::make(0, f.a1, f.fork_a, 1);
    Event a3 = Event::make(0, a2.id, f.fork_b, 2);
    f.world.insert(a2);
    f.world.insert(a3);
    CHECK_FALSE(oracle_sees(f.world, a3.id, f.fork_a));
    CHECK_FALSE(f.world.sees(a3.id, f.fork_a));
    CHECK_FALSE(f.world.sees(a3.id, f.fork_b));
    CHECK_FALSE(f.world.sees(a3.id, f.b1)); // blacklist covers all of the creator
    CHECK(f.world.sees(a3.id, f.a1));       // other creators unaffected
    CHECK(f.world.sees(a2.id, f.fork_a));   // a2 saw only one side
}

TEST_CASE("sees is not reflexive for a forker's own descendant of its fork") {
    // The forker extends one branch after having absorbed the other branch
    // through a peer: the new event observes its creator's fork among its
    // own ancestors, so it sees nothing by that creator, itself included.
    ForkedGraph f = build_forked();
    Event a2 = Event::make(0, f.a1, f.fork_b, 1);
    f.world.insert(a2);
    Event b_merge = Event::make(1, f.fork_a, a2.id, 3);
    f.world.insert(b_merge);
    CHECK(f.world.is_ancestor(f.fork_b, b_merge.id));
    CHECK_FALSE(f.world.sees(b_merge.id, b_merge.id));
    CHECK_FALSE(f.world.sees(b_merge.id, f.b1));
}

TEST_CASE("strongly sees on the worked graph") {
    Fig1 g = build_fig1();
    const World& w = g.world;

    CHECK(w.strongly_sees(g["B4"], g["B1"]));
    CHECK(w.strongly_sees(g["B4"], g["D1"]));
    CHECK_FALSE(w.strongly_sees(g["B4"], g["A1"]));
    CHECK_FALSE(w.strongly_sees(g["B4"], g["C1"]));
    CHECK(w.strongly_sees(g["B5"], g["C1"]));

    // Oracle route, same facts.
    CHECK(strongly_sees_oracle(w, g["B4"], g["B1"]));
    CHECK(strongly_sees_oracle(w, g["B4"], g["D1"]));
    CHECK_FALSE(strongly_sees_oracle(w, g["B4"], g["A1"]));
    CHECK_FALSE(strongly_sees_oracle(w, g["B4"], g["C1"]));
    CHECK(strongly_sees_oracle(w, g["B5"], g["C1"]));
}

TEST_CASE("supermajor / superminor") {
    CHECK(supermajor(3, 4)); // 3 > 2/3 * 4
    CHECK_FALSE(supermajor(2, 4));
    CHECK(superminor(2, 4));

    for (std::uint64_t n = 0; n <= 100; ++n)
        for (std::uint64_t m = 0; m <= n; ++m)
            CHECK(superminor(m, n) == !supermajor(n - m, n));
    CHECK_FALSE(check_supermajority_identities(200).has_value());
}

TEST_CASE("partial order, lemma 1 and lemma 2 hold on fuzzed worlds") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        FuzzWorld f = fuzz_world_with_mask({seed, 90, 12});
        const World& w = f.world;
        RelationTables tables(w);
        CAPTURE(seed);
        auto po = check_partial_order(w);
        CHECK_MESSAGE(!po, po.value_or(""));
        auto l1 = check_lemma1(w, tables);
        CHECK_MESSAGE(!l1, l1.value_or(""));
        auto l2 = check_lemma2(w, tables, f.honest);
        CHECK_MESSAGE(!l2, l2.value_or(""));
    }
}

TEST_CASE("memoized strongly_sees equals the oracle on all pairs of small worlds") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        World w = fuzz_world({seed, 70, 10});
        CAPTURE(seed);
        for (EventIndex y = 0; y < w.size(); ++y) {
            for (EventIndex x = 0; x < w.size(); ++x) {
                const EventId& yid = w.event_at(y).id;
                const EventId& xid = w.event_at(x).id;
                if (w.strongly_sees(yid, xid) != strongly_sees_oracle(w, yid, xid)) {
                    CAPTURE(to_hex(yid));
                    CAPTURE(to_hex(xid));
                    FAIL("strongly_sees disagrees with the oracle");
                }
            }
        }
    }
}

TEST_CASE("relations are pure functions of the ancestor subgraph") {
    // Rebuilding only an event's ancestry must reproduce its relations.
    World w = fuzz_world({41, 60, 30});
    const EventIndex probe = static_cast<EventIndex>(w.size() - 1);

    World sub(w.params());
    w.ancestor_bits(probe).for_each_set([&](std::size_t i) {
        // ancestor bits are ordered, parents first
        sub.insert(w.event_at(static_cast<EventIndex>(i)));
    });
    const EventId probe_id = w.event_at(probe).id;
    for (EventIndex i = 0; i < w.size(); ++i) {
        const EventId& xid = w.event_at(i).id;
        if (!sub.contains(xid)) continue;
        CHECK(w.strongly_sees(probe_id, xid) == sub.strongly_sees(probe_id, xid));
        CHECK(w.sees(probe_id, xid) == sub.sees(probe_id, xid));
    }
    CHECK(w.round_of(probe_id) == sub.round_of(probe_id));
}
