#pragma once

#include <cstdint>
#include <random>

#include "pwin/model.hpp"

namespace pwin {

struct GenOptions {
    int candidates = 4;
    int votes = 3;
    int max_blocks = 3;
    Rule rule = Rule::of(RuleFamily::plurality());
    WinnerMode mode = WinnerMode::CoWinner;
    std::uint64_t seed = 0;
    int distinguished = -1; // -1: drawn from the seed
};

// Deterministic random instance: same options, same instance. Candidate
// names are c1..cm. Only the raw mt19937_64 stream is consumed, so the
// output is stable across standard library implementations.
ElectionInstance generate_instance(const GenOptions& options);

// Uniform integer in [0, n) from the raw engine stream.
std::uint64_t bounded_random(std::mt19937_64& rng, std::uint64_t n);

} // namespace pwin
