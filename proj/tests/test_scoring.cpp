#include <algorithm>
#include <set>

#include "doctest.h"

#include "pwin/gen.hpp"
#include "pwin/oracle.hpp"
#include "pwin/scoring.hpp"
#include "test_support.hpp"

using namespace pwin;
using namespace pwin::test;

TEST_CASE("score_vector families") {
    CHECK(score_vector(RuleFamily::k_approval(2), 5).entries == std::vector<Score>{1, 1, 0, 0, 0});
    CHECK(score_vector(RuleFamily::borda(), 4).entries == std::vector<Score>{3, 2, 1, 0});
    CHECK(score_vector(RuleFamily::two_one_zero(), 3).entries == std::vector<Score>{2, 1, 0});
    CHECK(score_vector(RuleFamily::plurality(), 4).entries == std::vector<Score>{1, 0, 0, 0});
    CHECK(score_vector(RuleFamily::veto(), 4).entries == std::vector<Score>{1, 1, 1, 0});

    CHECK_THROWS_AS(score_vector(RuleFamily::k_approval(5), 5), ValidationError);
    CHECK_THROWS_AS(score_vector(RuleFamily::two_one_zero(), 2), ValidationError);
    CHECK_THROWS_AS(score_vector(RuleFamily::lemma6_template(2, 2, 5), 10), ValidationError);
    CHECK_THROWS_AS(score_vector(RuleFamily::borda(), 1), ValidationError);
}

TEST_CASE("template families produce the advertised shapes") {
    // i=2, k=2, a=1 at m=7: bottom-up (0,1,1,2,3,4,5)
    CHECK(score_vector(RuleFamily::lemma6_template(2, 2, 1), 7).entries ==
          std::vector<Score>{5, 4, 3, 2, 1, 1, 0});
    // i=3, k=1, a=2 at m=6: bottom-up (0,1,2,3,4,5) collapses to borda-like
    CHECK(score_vector(RuleFamily::lemma6_template(3, 1, 2), 6).entries ==
          std::vector<Score>{5, 4, 3, 2, 1, 0});
    // lemma7 i=1, k=1, l=4 at m=7: bottom-up (0,0,0,0,1,2,3)
    CHECK(score_vector(RuleFamily::lemma7_template(1, 1, 4), 7).entries ==
          std::vector<Score>{3, 2, 1, 0, 0, 0, 0});
    // lemma7 i=2, k=2, l=3 at m=9: bottom-up (0,1,1,1,2,2,3,4,5)
    CHECK(score_vector(RuleFamily::lemma7_template(2, 2, 3), 9).entries ==
          std::vector<Score>{5, 4, 3, 2, 2, 1, 1, 1, 0});
}

TEST_CASE("normalize") {
    CHECK(normalize(ScoringVector{{3, 3, 1, 1}}).entries == std::vector<Score>{1, 1, 0, 0});
    CHECK(normalize(ScoringVector{{1, 0, 0}}).entries == std::vector<Score>{1, 0, 0});
    CHECK(normalize(ScoringVector{{4, 2, 0}}).entries == std::vector<Score>{2, 1, 0});
}

TEST_CASE("classify") {
    const RuleClassification veto4 = classify(ScoringVector{{1, 1, 1, 0}});
    CHECK(veto4.distinct_values == 2);
    REQUIRE(veto4.two_valued_k.has_value());
    CHECK(*veto4.two_valued_k == 3);

    const RuleClassification tozo = classify(ScoringVector{{2, 1, 1, 0}});
    CHECK(tozo.distinct_values == 3);
    CHECK(tozo.is_two_one_zero);
    CHECK_FALSE(tozo.is_differentiating);
    CHECK_FALSE(tozo.two_valued_k.has_value());

    CHECK(classify(ScoringVector{{3, 1, 1, 1, 0}}).is_differentiating);
    CHECK_FALSE(classify(ScoringVector{{2, 1, 1, 1, 1, 0}}).is_differentiating);
    CHECK(classify(ScoringVector{{3, 2, 1, 0}}).max_equal_run == 1);
    CHECK(classify(ScoringVector{{1, 1, 1, 0}}).max_equal_run == 3);
}

TEST_CASE("classify recovers k for every k-approval vector up to m=8") {
    for (int m = 2; m <= 8; ++m)
        for (int k = 1; k < m; ++k) {
            const RuleClassification cls = classify(score_vector(RuleFamily::k_approval(k), m));
            REQUIRE(cls.two_valued_k.has_value());
            CHECK(*cls.two_valued_k == k);
        }
}

namespace {

PartitionedVote vote_of(const ElectionInstance& instance, int index) {
    return instance.profile.votes[static_cast<size_t>(index)];
}

} // namespace

TEST_CASE("s_max_vote on the example votes") {
    const ElectionInstance e6 = example6();
    const ScoringVector two_approval = score_vector(RuleFamily::k_approval(2), 5);
    const int a = e6.candidate_index("a");
    const int c = e6.candidate_index("c");
    CHECK(s_max_vote(vote_of(e6, 2), a, two_approval) == 0); // two candidates above -> rank 3
    CHECK(s_max_vote(vote_of(e6, 5), c, two_approval) == 1); // top block
    // alone in the top block: first entry, whatever the vector
    PartitionedVote top;
    top.blocks = {{2}, {0, 1, 3, 4}};
    CHECK(s_max_vote(top, 2, ScoringVector{{7, 4, 2, 1, 0}}) == 7);
}

TEST_CASE("s_max_profile on example6") {
    const ElectionInstance e6 = example6();
    const ScoringVector v = e6.scoring_vector();
    CHECK(s_max_profile(e6.profile, e6.candidate_index("c"), v) == 4);
    CHECK(s_max_profile(e6.profile, e6.candidate_index("b"), v) == 5);
    CHECK(s_max_profile(e6.profile, e6.candidate_index("a"), v) == 1);
    CHECK(s_max_profile(e6.profile, e6.candidate_index("d"), v) == 5);
    CHECK(s_max_profile(e6.profile, e6.candidate_index("e"), v) == 4);

    Profile single;
    single.votes = {vote_of(e6, 3)};
    CHECK(s_max_profile(single, e6.candidate_index("d"), v) ==
          s_max_vote(vote_of(e6, 3), e6.candidate_index("d"), v));
}

TEST_CASE("fix_distinguished splits the distinguished block") {
    const ElectionInstance e6 = example6();
    const int c = e6.candidate_index("c");

    const PartitionedVote fixed3 = fix_distinguished(vote_of(e6, 2), c);
    REQUIRE(fixed3.blocks.size() == 3);
    CHECK(fixed3.blocks[0] == vote_of(e6, 2).blocks[0]);
    CHECK(fixed3.blocks[1] == std::vector<int>{c});
    CHECK(fixed3.blocks[2] ==
          std::vector<int>{e6.candidate_index("a"), e6.candidate_index("d")});

    // already a topmost singleton: unchanged
    PartitionedVote topmost;
    topmost.blocks = {{2}, {0, 1}};
    CHECK(fix_distinguished(topmost, 2) == topmost);

    // single block
    PartitionedVote single;
    single.blocks = {{0, 1, 2}};
    const PartitionedVote fixed = fix_distinguished(single, 2);
    REQUIRE(fixed.blocks.size() == 2);
    CHECK(fixed.blocks[0] == std::vector<int>{2});
    CHECK(fixed.blocks[1] == std::vector<int>{0, 1});
}

TEST_CASE("s_max and s_min agree with exhaustive extension enumeration") {
    std::mt19937_64 rng(7);
    const std::vector<std::string> names{"a", "b", "c", "d", "e", "f"};
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + static_cast<int>(bounded_random(rng, 5));
        std::vector<int> order(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
        for (int i = m - 1; i > 0; --i)
            std::swap(order[static_cast<size_t>(i)],
                      order[bounded_random(rng, static_cast<std::uint64_t>(i + 1))]);
        PartitionedVote vote;
        size_t at = 0;
        while (at < order.size()) {
            const size_t len =
                std::min(order.size() - at, 1 + bounded_random(rng, 4)); // blocks of size <= 4
            std::vector<int> block(order.begin() + static_cast<std::ptrdiff_t>(at),
                                   order.begin() + static_cast<std::ptrdiff_t>(at + len));
            std::sort(block.begin(), block.end());
            vote.blocks.push_back(std::move(block));
            at += len;
        }
        std::vector<Score> entries;
        Score value = static_cast<Score>(1 + bounded_random(rng, 3));
        for (int i = 0; i < m; ++i) {
            entries.push_back(value);
            value += static_cast<Score>(bounded_random(rng, 3));
        }
        std::reverse(entries.begin(), entries.end());
        if (entries.front() == entries.back()) entries.front() += 1;
        const ScoringVector v{entries};

        const int c = static_cast<int>(bounded_random(rng, static_cast<std::uint64_t>(m)));
        Score seen_max = std::numeric_limits<Score>::min();
        Score seen_min = std::numeric_limits<Score>::max();
        ExtensionCursor cursor(vote, names);
        do {
            const auto& ext = cursor.current();
            for (size_t r = 0; r < ext.size(); ++r)
                if (ext[r] == c) {
                    const Score s = v.at_rank(static_cast<int>(r) + 1);
                    seen_max = std::max(seen_max, s);
                    seen_min = std::min(seen_min, s);
                }
        } while (cursor.advance());
        CHECK(s_max_vote(vote, c, v) == seen_max);
        CHECK(s_min_vote(vote, c, v) == seen_min);
    }
}

TEST_CASE("normalize preserves winner sets on complete profiles") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 2 + static_cast<int>(bounded_random(rng, 4));
        const int n = 1 + static_cast<int>(bounded_random(rng, 4));
        std::vector<Score> entries;
        Score value = static_cast<Score>(bounded_random(rng, 3));
        for (int i = 0; i < m; ++i) {
            entries.push_back(value);
            value += static_cast<Score>(bounded_random(rng, 4));
        }
        std::reverse(entries.begin(), entries.end());
        if (entries.front() == entries.back()) entries.front() += 2;
        // scale so normalization has work to do
        for (auto& e : entries) e = e * 3 + 5;
        const ScoringVector v{entries};
        const ScoringVector norm = normalize(v);

        LinearProfile profile;
        for (int i = 0; i < n; ++i) {
            LinearOrder order(static_cast<size_t>(m));
            for (int a = 0; a < m; ++a) order[static_cast<size_t>(a)] = a;
            for (int a = m - 1; a > 0; --a)
                std::swap(order[static_cast<size_t>(a)],
                          order[bounded_random(rng, static_cast<std::uint64_t>(a + 1))]);
            profile.push_back(std::move(order));
        }
        const std::vector<Score> t1 = score_linear_profile(profile, m, v);
        const std::vector<Score> t2 = score_linear_profile(profile, m, norm);
        std::set<int> w1, w2;
        const Score m1 = *std::max_element(t1.begin(), t1.end());
        const Score m2 = *std::max_element(t2.begin(), t2.end());
        for (int a = 0; a < m; ++a) {
            if (t1[static_cast<size_t>(a)] == m1) w1.insert(a);
            if (t2[static_cast<size_t>(a)] == m2) w2.insert(a);
        }
        CHECK(w1 == w2);
    }
}

TEST_CASE("fixing the distinguished candidate never changes the oracle decision") {
    const std::vector<ElectionInstance> corpus = agreement_corpus(60, 23);
    for (const ElectionInstance& instance : corpus) {
        for (const WinnerMode mode : {WinnerMode::CoWinner, WinnerMode::UniqueWinner}) {
            ElectionInstance base = instance;
            base.mode = mode;
            ElectionInstance fixed = base;
            fixed.profile = fix_distinguished(base.profile, base.distinguished);
            CHECK(decide_oracle(base).yes == decide_oracle(fixed).yes);
        }
    }
}

TEST_CASE("every extension of the fixed profile pins the distinguished score") {
    const std::vector<ElectionInstance> corpus = agreement_corpus(25, 31, 2'000);
    for (const ElectionInstance& instance : corpus) {
        const ScoringVector v = instance.scoring_vector();
        const Score expected = s_max_profile(instance.profile, instance.distinguished, v);
        const Profile fixed = fix_distinguished(instance.profile, instance.distinguished);

        std::vector<ExtensionCursor> cursors;
        for (const auto& vote : fixed.votes) cursors.emplace_back(vote, instance.candidates);
        // walk a few hundred joint extensions, odometer style
        for (int step = 0; step < 300; ++step) {
            Score total = 0;
            for (const auto& cursor : cursors) {
                const auto& ext = cursor.current();
                for (size_t r = 0; r < ext.size(); ++r)
                    if (ext[r] == instance.distinguished)
                        total += v.at_rank(static_cast<int>(r) + 1);
            }
            CHECK(total == expected);
            size_t j = cursors.size();
            bool advanced = false;
            while (j-- > 0) {
                if (cursors[j].advance()) {
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
}
