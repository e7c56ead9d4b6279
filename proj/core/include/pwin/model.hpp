#pragma once

#include <string>
#include <vector>

#include "pwin/scoring.hpp"

namespace pwin {

// A linear order of candidate indices, rank 1 first.
using LinearOrder = std::vector<int>;
using LinearProfile = std::vector<LinearOrder>;

enum class WinnerMode { CoWinner, UniqueWinner };

// An ordered sequence of blocks of mutually incomparable candidates.
// Blocks hold candidate indices, sorted ascending; earlier blocks are
// preferred to later ones.
struct PartitionedVote {
    std::vector<std::vector<int>> blocks;

    bool is_linear() const;
    int candidate_count() const;
    // 1-based rank of the first position of the block containing c, and the
    // index of that block.
    int block_of(int c) const;

    bool operator==(const PartitionedVote&) const = default;
};

struct Profile {
    std::vector<PartitionedVote> votes;

    int size() const { return static_cast<int>(votes.size()); }
    bool operator==(const Profile&) const = default;
};

struct ElectionInstance {
    std::vector<std::string> candidates; // unique non-empty names
    Profile profile;
    Rule rule;
    int distinguished = 0;
    WinnerMode mode = WinnerMode::CoWinner;

    int m() const { return static_cast<int>(candidates.size()); }
    int candidate_index(const std::string& name) const; // -1 if unknown
    ScoringVector scoring_vector() const { return rule.resolve(m()); }

    bool operator==(const ElectionInstance&) const = default;
};

// Succeeds iff the blocks partition {0,...,|candidates|-1}: pairwise
// disjoint, non-empty, jointly covering. Messages carry the offending name.
void validate_partitioned(const PartitionedVote& vote, const std::vector<std::string>& candidates);

// Full instance validation: candidate uniqueness, per-vote partitions,
// vector length, distinguished membership.
void validate_instance(const ElectionInstance& instance);

// JSON instance format:
//   {"candidates": [...],
//    "rule": {"family": "k-approval", "k": 2} | {"vector": [2,1,1,0]},
//    "votes": [[["b","c"],["a"]], ...],
//    "distinguished": "c",
//    "mode": "unique" | "co-winner"}
ElectionInstance parse_instance(const std::string& text);
std::string serialize_instance(const ElectionInstance& instance);

ElectionInstance load_instance_file(const std::string& path);

} // namespace pwin
