#pragma once

#include <random>
#include <string>
#include <vector>

#include "pwin/flow.hpp"
#include "pwin/gen.hpp"
#include "pwin/model.hpp"
#include "pwin/oracle.hpp"

namespace pwin::test {

inline std::string fixture_path(const std::string& name) {
    return std::string(PWIN_FIXTURE_DIR) + "/" + name;
}

inline ElectionInstance example6(WinnerMode mode = WinnerMode::UniqueWinner) {
    ElectionInstance instance = load_instance_file(fixture_path("example6.json"));
    instance.mode = mode;
    return instance;
}

// Instance from candidate names and votes given as blocks of names.
ElectionInstance make_instance(std::vector<std::string> candidates,
                               std::vector<std::vector<std::vector<std::string>>> votes, Rule rule,
                               const std::string& distinguished,
                               WinnerMode mode = WinnerMode::CoWinner);

// Whether `witness` is a complete profile extending `profile` vote by vote.
bool witness_extends(const LinearProfile& witness, const Profile& profile);

// Breadth-first augmenting-path max flow, independent of the Dinic
// implementation under test.
Score ek_max_flow(const FlowNetwork& net);

// Seeded corpus of small instances over all k-approval rules plus
// (2,1,...,1,0), with the collapsed joint extension count capped so the
// oracle stays within its default budget.
std::vector<ElectionInstance> agreement_corpus(int count, std::uint64_t seed,
                                               std::uint64_t max_joint = 50'000);

// All 3DM instances over axis size M with exactly `s` triples, enumerated as
// subsets of the full triple grid in lexicographic order.
std::vector<ThreeDMInstance> all_3dm_instances(int M, int s);

} // namespace pwin::test
