#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwin {

using Score = long long;

struct PartitionedVote;
struct Profile;

// Base error type for everything the library can reject.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct UnsupportedRuleError : Error {
    using Error::Error;
};
struct BudgetError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};

// A positional scoring vector, stored best-to-worst: entries[0] is the score
// of rank 1. Entries are non-negative and non-increasing, and for m >= 2 the
// first entry must be strictly greater than the last.
struct ScoringVector {
    std::vector<Score> entries;

    ScoringVector() = default;
    explicit ScoringVector(std::vector<Score> e) : entries(std::move(e)) {}

    int size() const { return static_cast<int>(entries.size()); }
    // Score of the 1-based rank.
    Score at_rank(int rank) const { return entries.at(static_cast<size_t>(rank - 1)); }
    // Value occupying the 1-based bottom-up position p (p = size() is the top).
    Score at_bottom_up(int p) const { return entries.at(static_cast<size_t>(size() - p)); }

    // Throws ValidationError if the monotonicity/spread invariants fail.
    void validate() const;

    bool operator==(const ScoringVector&) const = default;
};

// Families of scoring rules: one vector per number of candidates m.
struct RuleFamily {
    enum class Kind {
        Plurality,
        Veto,
        KApproval,     // k ones then zeros
        Borda,
        TwoOneZero,    // (2,1,...,1,0), m >= 3
        ExplicitTable, // per-m table
        Lemma6Template,
        Lemma7Template,
    };

    Kind kind = Kind::Plurality;
    int k = 0;       // KApproval threshold; upper run length for the templates
    int anchor = 0;  // bottom-up anchor index i for the templates
    int run_l = 0;   // lower run length for Lemma7Template
    Score run_value = 0; // the value a for Lemma6Template
    std::map<int, ScoringVector> table;

    static RuleFamily plurality() { return {Kind::Plurality}; }
    static RuleFamily veto() { return {Kind::Veto}; }
    static RuleFamily k_approval(int k);
    static RuleFamily borda() { return {Kind::Borda}; }
    static RuleFamily two_one_zero() { return {Kind::TwoOneZero}; }
    static RuleFamily explicit_table(std::map<int, ScoringVector> t);
    static RuleFamily lemma6_template(int i, int k, Score a);
    static RuleFamily lemma7_template(int i, int k, int l);

    std::string name() const;
    bool operator==(const RuleFamily&) const = default;
};

// Instance rule: either a family (resolved per m) or one explicit vector.
struct Rule {
    std::optional<RuleFamily> family;
    std::optional<ScoringVector> vector;

    static Rule of(RuleFamily f) { return Rule{std::move(f), std::nullopt}; }
    static Rule of(ScoringVector v) { return Rule{std::nullopt, std::move(v)}; }

    // The scoring vector this rule uses for m candidates.
    ScoringVector resolve(int m) const;

    bool operator==(const Rule&) const = default;
};

struct RuleClassification {
    int distinct_values = 0;
    std::optional<int> two_valued_k; // present iff distinct_values == 2
    bool is_two_one_zero = false;
    bool is_differentiating = false;
    int max_equal_run = 0;
};

// Vector of length m for the family; throws on out-of-domain m.
ScoringVector score_vector(const RuleFamily& family, int m);

// Subtract the minimum and divide by the gcd. Preserves every comparison
// between candidate totals.
ScoringVector normalize(const ScoringVector& v);

// Classification of a single normalized vector.
RuleClassification classify(const ScoringVector& v);

// Maximum score candidate c can obtain over the linear extensions of o:
// the vector entry at rank (number of candidates strictly above c's block)+1.
Score s_max_vote(const PartitionedVote& o, int c, const ScoringVector& v);

// Sum of per-vote maxima over the profile.
Score s_max_profile(const Profile& o, int c, const ScoringVector& v);

// Minimum score candidate c can obtain over the linear extensions of o
// (c pushed to the bottom of its block).
Score s_min_vote(const PartitionedVote& o, int c, const ScoringVector& v);

// Split c's block into {c} followed by the rest, in every vote. Every
// extension of the result extends the input, and c's score is pinned to its
// per-vote maximum.
Profile fix_distinguished(const Profile& o, int c);
PartitionedVote fix_distinguished(const PartitionedVote& o, int c);

// Totals for a complete profile of linear orders over m candidates.
std::vector<Score> score_linear_profile(const std::vector<std::vector<int>>& votes, int m,
                                        const ScoringVector& v);

} // namespace pwin
