#include <algorithm>
#include <set>

#include "doctest.h"

#include "pwin/gen.hpp"
#include "pwin/oracle.hpp"
#include "test_support.hpp"

using namespace pwin;
using namespace pwin::test;

TEST_CASE("extension cursor visits each extension exactly once") {
    const std::vector<std::string> names{"a", "b", "c"};

    PartitionedVote two_then_one;
    two_then_one.blocks = {{0, 1}, {2}};
    ExtensionCursor cursor(two_then_one, names);
    CHECK(cursor.count() == 2);
    std::set<LinearOrder> seen;
    do {
        seen.insert(cursor.current());
    } while (cursor.advance());
    CHECK(seen == std::set<LinearOrder>{{0, 1, 2}, {1, 0, 2}});

    PartitionedVote linear;
    linear.blocks = {{0}, {1}, {2}};
    ExtensionCursor linear_cursor(linear, names);
    CHECK(linear_cursor.count() == 1);
    CHECK_FALSE(linear_cursor.advance());

    PartitionedVote free_block;
    free_block.blocks = {{0, 1, 2}};
    ExtensionCursor free_cursor(free_block, names);
    CHECK(free_cursor.count() == 6);
    std::set<LinearOrder> all;
    do {
        all.insert(free_cursor.current());
    } while (free_cursor.advance());
    CHECK(all.size() == 6);
}

TEST_CASE("extension cursor enumerates by name order, not index order") {
    // names out of index order: block {0,1} sorted by name is (1, 0)
    const std::vector<std::string> names{"z", "a"};
    PartitionedVote vote;
    vote.blocks = {{0, 1}};
    ExtensionCursor cursor(vote, names);
    CHECK(cursor.current() == LinearOrder{1, 0}); // "a" before "z"
    CHECK(cursor.advance());
    CHECK(cursor.current() == LinearOrder{0, 1});
    CHECK_FALSE(cursor.advance());
}

TEST_CASE("oracle decides the three-candidate example both ways") {
    const ElectionInstance base = make_instance(
        {"a", "b", "c"}, {{{"a"}, {"b"}, {"c"}}, {{"c"}, {"a", "b"}}},
        Rule::of(ScoringVector{{2, 1, 0}}), "c", WinnerMode::CoWinner);

    const OracleResult co = decide_oracle(base);
    CHECK(co.yes);
    REQUIRE(co.witness.has_value());
    // first witness in enumeration order puts b before a in the second vote
    CHECK((*co.witness)[1] == LinearOrder{2, 1, 0});
    CHECK(witness_extends(*co.witness, base.profile));

    ElectionInstance unique = base;
    unique.mode = WinnerMode::UniqueWinner;
    CHECK_FALSE(decide_oracle(unique).yes);
}

TEST_CASE("oracle on example6 and degenerate cases") {
    CHECK(decide_oracle(example6(WinnerMode::CoWinner)).yes);
    CHECK(decide_oracle(example6(WinnerMode::UniqueWinner)).yes);

    const ElectionInstance pair =
        make_instance({"b", "c"}, {{{"b", "c"}}}, Rule::of(RuleFamily::plurality()), "c",
                      WinnerMode::UniqueWinner);
    CHECK(decide_oracle(pair).yes);

    const ElectionInstance lone = make_instance({"c"}, {{{"c"}}},
                                                Rule::of(RuleFamily::plurality()), "c");
    CHECK(decide_oracle(lone).yes);
}

TEST_CASE("oracle matches raw joint enumeration on tiny instances") {
    // Independent route: full product of block permutations, no collapsing.
    const std::vector<ElectionInstance> corpus = agreement_corpus(40, 171, 1'000);
    for (ElectionInstance instance : corpus) {
        for (const WinnerMode mode : {WinnerMode::CoWinner, WinnerMode::UniqueWinner}) {
            instance.mode = mode;
            const ScoringVector v = instance.scoring_vector();
            std::vector<ExtensionCursor> cursors;
            for (const auto& vote : instance.profile.votes)
                cursors.emplace_back(vote, instance.candidates);
            bool expected = false;
            while (true) {
                std::vector<Score> totals(static_cast<size_t>(instance.m()), 0);
                for (const auto& cursor : cursors) {
                    const auto& ext = cursor.current();
                    for (size_t r = 0; r < ext.size(); ++r)
                        totals[static_cast<size_t>(ext[r])] += v.at_rank(static_cast<int>(r) + 1);
                }
                const Score sc = totals[static_cast<size_t>(instance.distinguished)];
                bool ok = true;
                for (int a = 0; a < instance.m() && ok; ++a) {
                    if (a == instance.distinguished) continue;
                    ok = mode == WinnerMode::UniqueWinner ? totals[static_cast<size_t>(a)] < sc
                                                          : totals[static_cast<size_t>(a)] <= sc;
                }
                if (ok) {
                    expected = true;
                    break;
                }
                size_t j = cursors.size();
                bool advanced = false;
                while (j-- > 0)
                    if (cursors[j].advance()) {
                        advanced = true;
                        break;
                    }
                if (!advanced) break;
            }
            CHECK(decide_oracle(instance).yes == expected);
        }
    }
}

TEST_CASE("oracle budget violations raise instead of answering") {
    ElectionInstance instance = make_instance(
        {"a", "b", "c", "d", "e"}, {{{"a", "b", "c", "d", "e"}}},
        Rule::of(RuleFamily::borda()), "c", WinnerMode::CoWinner);
    OracleOptions tight;
    tight.max_joint = 10;
    CHECK_THROWS_AS(decide_oracle(instance, tight), BudgetError);
    tight.max_joint = 1'000'000;
    tight.max_per_vote = 10;
    CHECK_THROWS_AS(decide_oracle(instance, tight), BudgetError);
}

TEST_CASE("renaming candidates never changes the oracle decision") {
    const std::vector<ElectionInstance> corpus = agreement_corpus(40, 57);
    std::mt19937_64 rng(99);
    for (const ElectionInstance& instance : corpus) {
        ElectionInstance renamed = instance;
        // apply a random permutation to the name strings only; indices and
        // votes stay put, so the election is isomorphic
        std::vector<std::string> fresh;
        for (size_t i = 0; i < renamed.candidates.size(); ++i)
            fresh.push_back("r" + std::to_string(i));
        for (size_t i = fresh.size(); i-- > 1;)
            std::swap(fresh[i], fresh[bounded_random(rng, i + 1)]);
        renamed.candidates = fresh;
        CHECK(decide_oracle(renamed).yes == decide_oracle(instance).yes);
    }
}

TEST_CASE("pruning changes neither the decision nor the first witness") {
    const std::vector<ElectionInstance> corpus = agreement_corpus(80, 301);
    for (ElectionInstance instance : corpus) {
        for (const WinnerMode mode : {WinnerMode::CoWinner, WinnerMode::UniqueWinner}) {
            instance.mode = mode;
            OracleOptions pruned;
            pruned.prune = true;
            const OracleResult a = decide_oracle(instance);
            const OracleResult b = decide_oracle(instance, pruned);
            CHECK(a.yes == b.yes);
            CHECK(a.witness == b.witness);
        }
    }
}

TEST_CASE("solve_3dm on the small fixtures") {
    ThreeDMInstance one;
    one.xs = {"x1"};
    one.ys = {"y1"};
    one.zs = {"z1"};
    one.triples = {{0, 0, 0}};
    CHECK(solve_3dm(one).yes);

    ThreeDMInstance blocked;
    blocked.xs = {"x1", "x2"};
    blocked.ys = {"y1", "y2"};
    blocked.zs = {"z1", "z2"};
    blocked.triples = {{0, 0, 0}, {1, 0, 1}}; // y1 repeated, y2 uncovered
    CHECK_FALSE(solve_3dm(blocked).yes);

    ThreeDMInstance covered = blocked;
    covered.triples = {{0, 0, 0}, {1, 1, 1}, {0, 1, 1}};
    const ThreeDMResult r = solve_3dm(covered);
    CHECK(r.yes);
    REQUIRE(r.matching.has_value());
    CHECK(*r.matching == std::vector<int>{0, 1});
}

TEST_CASE("3dm validation and JSON round trip") {
    ThreeDMInstance bad;
    bad.xs = {"x1"};
    bad.ys = {"y1"};
    bad.zs = {"z1"};
    bad.triples = {{0, 0, 2}};
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    const std::string text = R"({"X":["x1","x2"],"Y":["y1","y2"],"Z":["z1","z2"],
                                 "S":[["x1","y1","z1"],["x2","y2","z2"]]})";
    const ThreeDMInstance parsed = parse_3dm(text);
    CHECK(parsed.m_size() == 2);
    CHECK(parsed.triples.size() == 2);
    const ThreeDMInstance again = parse_3dm(serialize_3dm(parsed));
    CHECK(again.triples == parsed.triples);
    CHECK(again.xs == parsed.xs);

    // y-axis element used on the wrong slot
    CHECK_THROWS_AS(parse_3dm(R"({"X":["x1"],"Y":["y1"],"Z":["z1"],"S":[["x1","z1","y1"]]})"),
                    ParseError);
}

TEST_CASE("collapsed joint counts divide the raw counts") {
    const std::vector<ElectionInstance> corpus = agreement_corpus(30, 401);
    for (const ElectionInstance& instance : corpus) {
        const std::uint64_t raw = joint_extension_count(instance, false);
        const std::uint64_t collapsed = joint_extension_count(instance, true);
        CHECK(collapsed <= raw);
        CHECK(collapsed >= 1);
        if (collapsed < 1'000) {
            // the oracle really visits that many leaves at most
            OracleOptions options;
            options.max_joint = collapsed;
            CHECK_NOTHROW(decide_oracle(instance, options));
        }
    }
}
