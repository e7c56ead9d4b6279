#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwin/model.hpp"
#include "pwin/oracle.hpp"

namespace pwin {

// Score-adjustment request: named candidates with integer offsets, plus a
// non-empty dummy pool that absorbs the transfers.
struct AdjustmentTarget {
    std::vector<std::string> named;
    std::vector<Score> offsets; // aligned with named
    std::vector<std::string> dummies;
};

struct AdjustmentProfile {
    std::vector<std::string> candidates; // named then dummies; vote indices refer here
    LinearProfile votes;
    Score lambda = 0;
};

// Builds a linear profile in which every named candidate totals exactly
// lambda + offset and every dummy totals strictly less than lambda.
// Vote count is at most A * |C| * (|named|+1) * (sum |offset| + 1) where A is
// the sum of absolute Bezout coefficients over the vector's distinct score
// gaps (A = 1 whenever some gap equals 1).
AdjustmentProfile build_adjustment_profile(const AdjustmentTarget& target, const ScoringVector& v);

// The Bezout coefficient weight A in the bound above, for a given vector.
Score adjustment_bezout_weight(const ScoringVector& v);

enum class ShapeKind { Lemma6, Lemma7 };

struct ShapeAnchor {
    int i = 0; // bottom-up anchor index
    int k = 0; // run length at the anchor (lemma6) / above it (lemma7)
};

// Lowest bottom-up anchor where the vector matches the construction's
// required pattern; l is the required lower-run length for Lemma7.
std::optional<ShapeAnchor> find_shape(const ScoringVector& v, ShapeKind which, int l = 0);

// Bookkeeping emitted alongside a generated instance, enough to audit the
// construction and to re-check tightness.
struct ReductionLayout {
    ShapeKind kind = ShapeKind::Lemma6;
    int m = 0;
    int anchor_i = 0;
    int run_k = 0;
    int run_l = 0; // Lemma7 only
    ThreeDMInstance three_dm;
    std::vector<std::string> pad_candidates;               // H
    std::vector<std::vector<std::string>> per_triple_pads; // H_s (Lemma6)
    std::vector<std::vector<std::string>> bottom_fill;     // C_s per triple
    std::vector<std::string> dummies;                      // D
    std::string distinguished;
    Score lambda = 0;
    std::map<std::string, Score> q_offsets;    // X_w fed to the adjustment profile
    std::map<std::string, Score> max_partial;  // Lemma7 allowance per E u H candidate
    int adjustment_vote_count = 0;
};

struct ReductionOutput {
    ElectionInstance instance;
    ReductionLayout layout;
};

// 3DM -> Possible-Winner instance through the single-free-block construction.
// Requires |S| > M and a vector with value a+1 directly above a k-run of a>0
// directly above a-1 at bottom-up anchor i >= 2.
ReductionOutput reduce_lemma6(const ThreeDMInstance& input, int k, int i, const RuleFamily& family);

// 3DM -> Possible-Winner instance through the two-free-block construction.
// Requires a run of l = 3M-2 equal values at anchor i, a strictly greater
// k-run above it, and a strictly greater single value above that.
ReductionOutput reduce_lemma7(const ThreeDMInstance& input, int i, int k, const RuleFamily& family);

// Verifies that the sum of the recorded allowances over the contested
// positions matches the position total exactly, block sum by block sum.
// Throws ValidationError naming the first failing sum.
void check_tightness(const ReductionOutput& output);

std::string serialize_layout(const ReductionLayout& layout);

} // namespace pwin
