#include "pwin/gen.hpp"

#include <algorithm>

namespace pwin {

std::uint64_t bounded_random(std::mt19937_64& rng, std::uint64_t n) {
    return n <= 1 ? 0 : rng() % n;
}

ElectionInstance generate_instance(const GenOptions& options) {
    if (options.candidates < 1) throw ValidationError("generator requires at least 1 candidate");
    if (options.votes < 0) throw ValidationError("generator requires a non-negative vote count");
    if (options.max_blocks < 1) throw ValidationError("generator requires max_blocks >= 1");

    ElectionInstance instance;
    const int m = options.candidates;
    for (int i = 1; i <= m; ++i) instance.candidates.push_back("c" + std::to_string(i));
    instance.rule = options.rule;
    instance.mode = options.mode;

    std::mt19937_64 rng(options.seed);
    instance.distinguished = options.distinguished >= 0 && options.distinguished < m
                                 ? options.distinguished
                                 : static_cast<int>(bounded_random(rng, static_cast<std::uint64_t>(m)));

    const int block_cap = std::min(options.max_blocks, m);
    for (int i = 0; i < options.votes; ++i) {
        std::vector<int> order(static_cast<size_t>(m));
        for (int a = 0; a < m; ++a) order[static_cast<size_t>(a)] = a;
        for (int a = m - 1; a > 0; --a)
            std::swap(order[static_cast<size_t>(a)],
                      order[bounded_random(rng, static_cast<std::uint64_t>(a + 1))]);

        const int q = 1 + static_cast<int>(bounded_random(rng, static_cast<std::uint64_t>(block_cap)));
        // q-1 distinct cut points over 1..m-1.
        std::vector<int> cuts;
        for (int p = 1; p < m; ++p) cuts.push_back(p);
        for (size_t a = 0; a + 1 < cuts.size(); ++a)
            std::swap(cuts[a], cuts[a + bounded_random(rng, cuts.size() - a)]);
        cuts.resize(static_cast<size_t>(q - 1));
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(m);

        PartitionedVote vote;
        int from = 0;
        for (int cut : cuts) {
            std::vector<int> block(order.begin() + from, order.begin() + cut);
            std::sort(block.begin(), block.end());
            vote.blocks.push_back(std::move(block));
            from = cut;
        }
        instance.profile.votes.push_back(std::move(vote));
    }
    validate_instance(instance);
    return instance;
}

} // namespace pwin
