#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwin/model.hpp"

namespace pwin {

// Iterates every linear extension of a partitioned vote exactly once.
// Within a block, permutations run in lexicographic order of candidate
// names; the last block varies fastest.
class ExtensionCursor {
  public:
    ExtensionCursor(const PartitionedVote& vote, const std::vector<std::string>& names,
                    std::uint64_t per_vote_budget = 1'000'000);

    // Product of block factorials (saturating at uint64 max).
    std::uint64_t count() const { return count_; }
    const LinearOrder& current() const { return current_; }
    // Advances to the next extension; false once all have been visited.
    bool advance();
    void reset();

  private:
    void rebuild_current();
    std::vector<std::vector<int>> block_base_;  // members, name-sorted
    std::vector<std::vector<int>> block_perms_; // current rank permutation per block
    std::vector<size_t> block_offsets_;
    LinearOrder current_;
    std::uint64_t count_ = 1;
};

struct OracleOptions {
    // Joint extension budget across all votes, counted after collapsing
    // per-vote extensions that assign identical scores to every candidate.
    std::uint64_t max_joint = 1'000'000;
    // Cap on a single vote's extension count.
    std::uint64_t max_per_vote = 1'000'000;
    // Sound branch-and-bound on per-vote score ranges. Off by default;
    // never changes the decision or the first witness.
    bool prune = false;
};

struct OracleResult {
    bool yes = false;
    std::optional<LinearProfile> witness; // first witness in enumeration order
};

// Ground truth: enumerates joint extensions and reports whether the
// distinguished candidate wins (unique mode) or co-wins in at least one.
OracleResult decide_oracle(const ElectionInstance& instance, const OracleOptions& options = {});

// Number of joint extensions the oracle would visit (saturating).
// `collapsed` counts one representative per score-equivalent class, which is
// what the oracle's budget is charged against; otherwise the raw product of
// block factorials.
std::uint64_t joint_extension_count(const ElectionInstance& instance, bool collapsed = true);

// 3-Dimensional Matching. Triples index into xs/ys/zs.
struct ThreeDMInstance {
    std::vector<std::string> xs, ys, zs;
    std::vector<std::array<int, 3>> triples;

    int m_size() const { return static_cast<int>(xs.size()); }
    void validate() const;
};

struct ThreeDMResult {
    bool yes = false;
    std::optional<std::vector<int>> matching; // triple indices
};

// Brute force over all M-subsets of the triples.
ThreeDMResult solve_3dm(const ThreeDMInstance& instance, std::uint64_t budget = 1'000'000);

// JSON format: {"X": [...], "Y": [...], "Z": [...], "S": [["x1","y1","z1"], ...]}
ThreeDMInstance parse_3dm(const std::string& text);
std::string serialize_3dm(const ThreeDMInstance& instance);
ThreeDMInstance load_3dm_file(const std::string& path);

} // namespace pwin
