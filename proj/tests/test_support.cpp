#include "test_support.hpp"

#include <algorithm>
#include <queue>

namespace pwin::test {

ElectionInstance make_instance(std::vector<std::string> candidates,
                               std::vector<std::vector<std::vector<std::string>>> votes, Rule rule,
                               const std::string& distinguished, WinnerMode mode) {
    ElectionInstance instance;
    instance.candidates = std::move(candidates);
    for (const auto& vote : votes) {
        PartitionedVote pv;
        for (const auto& block_names : vote) {
            std::vector<int> block;
            for (const auto& name : block_names) {
                const int idx = instance.candidate_index(name);
                if (idx < 0) throw ValidationError("test instance: unknown name " + name);
                block.push_back(idx);
            }
            std::sort(block.begin(), block.end());
            pv.blocks.push_back(std::move(block));
        }
        instance.profile.votes.push_back(std::move(pv));
    }
    instance.rule = std::move(rule);
    instance.distinguished = instance.candidate_index(distinguished);
    instance.mode = mode;
    validate_instance(instance);
    return instance;
}

bool witness_extends(const LinearProfile& witness, const Profile& profile) {
    if (witness.size() != profile.votes.size()) return false;
    for (size_t i = 0; i < witness.size(); ++i) {
        const auto& order = witness[i];
        size_t pos = 0;
        for (const auto& block : profile.votes[i].blocks) {
            std::vector<int> slice(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                   order.begin() + static_cast<std::ptrdiff_t>(pos + block.size()));
            std::sort(slice.begin(), slice.end());
            if (slice != block) return false;
            pos += block.size();
        }
        if (pos != order.size()) return false;
    }
    return true;
}

Score ek_max_flow(const FlowNetwork& net) {
    struct Edge {
        int to;
        Score cap;
        size_t rev;
    };
    std::vector<std::vector<Edge>> g(static_cast<size_t>(net.node_count));
    for (const auto& a : net.arcs) {
        g[static_cast<size_t>(a.from)].push_back({a.to, a.capacity, g[static_cast<size_t>(a.to)].size()});
        g[static_cast<size_t>(a.to)].push_back({a.from, 0, g[static_cast<size_t>(a.from)].size() - 1});
    }
    Score flow = 0;
    while (true) {
        std::vector<std::pair<int, size_t>> parent(static_cast<size_t>(net.node_count), {-1, 0});
        std::queue<int> q;
        q.push(net.source);
        parent[static_cast<size_t>(net.source)] = {net.source, 0};
        while (!q.empty() && parent[static_cast<size_t>(net.sink)].first < 0) {
            const int u = q.front();
            q.pop();
            for (size_t e = 0; e < g[static_cast<size_t>(u)].size(); ++e) {
                const Edge& edge = g[static_cast<size_t>(u)][e];
                if (edge.cap > 0 && parent[static_cast<size_t>(edge.to)].first < 0) {
                    parent[static_cast<size_t>(edge.to)] = {u, e};
                    q.push(edge.to);
                }
            }
        }
        if (parent[static_cast<size_t>(net.sink)].first < 0) return flow;
        Score push = std::numeric_limits<Score>::max();
        for (int v = net.sink; v != net.source;) {
            const auto [u, e] = parent[static_cast<size_t>(v)];
            push = std::min(push, g[static_cast<size_t>(u)][e].cap);
            v = u;
        }
        for (int v = net.sink; v != net.source;) {
            const auto [u, e] = parent[static_cast<size_t>(v)];
            Edge& edge = g[static_cast<size_t>(u)][e];
            edge.cap -= push;
            g[static_cast<size_t>(edge.to)][edge.rev].cap += push;
            v = u;
        }
        flow += push;
    }
}

std::vector<ElectionInstance> agreement_corpus(int count, std::uint64_t seed,
                                               std::uint64_t max_joint) {
    std::vector<ElectionInstance> corpus;
    std::mt19937_64 rng(seed);
    int rule_cycle = 0;
    while (static_cast<int>(corpus.size()) < count) {
        GenOptions options;
        options.candidates = 2 + static_cast<int>(bounded_random(rng, 4)); // 2..5
        options.votes = 1 + static_cast<int>(bounded_random(rng, 5));      // 1..5
        options.max_blocks = 1 + static_cast<int>(bounded_random(rng, 3)); // 1..3
        options.seed = rng();

        const int m = options.candidates;
        std::vector<Rule> rules;
        for (int k = 1; k < m; ++k) rules.push_back(Rule::of(RuleFamily::k_approval(k)));
        if (m >= 3) rules.push_back(Rule::of(RuleFamily::two_one_zero()));
        options.rule = rules[static_cast<size_t>(rule_cycle++) % rules.size()];

        ElectionInstance instance = generate_instance(options);
        if (joint_extension_count(instance) > max_joint) continue;
        corpus.push_back(std::move(instance));
    }
    return corpus;
}

std::vector<ThreeDMInstance> all_3dm_instances(int M, int s) {
    ThreeDMInstance base;
    for (int i = 1; i <= M; ++i) {
        base.xs.push_back("x" + std::to_string(i));
        base.ys.push_back("y" + std::to_string(i));
        base.zs.push_back("z" + std::to_string(i));
    }
    std::vector<std::array<int, 3>> grid;
    for (int x = 0; x < M; ++x)
        for (int y = 0; y < M; ++y)
            for (int z = 0; z < M; ++z) grid.push_back({x, y, z});

    std::vector<ThreeDMInstance> out;
    std::vector<int> pick(static_cast<size_t>(s));
    auto rec = [&](auto&& self, int from, int depth) -> void {
        if (depth == s) {
            ThreeDMInstance instance = base;
            for (int idx : pick) instance.triples.push_back(grid[static_cast<size_t>(idx)]);
            out.push_back(std::move(instance));
            return;
        }
        for (int t = from; t <= static_cast<int>(grid.size()) - (s - depth); ++t) {
            pick[static_cast<size_t>(depth)] = t;
            self(self, t + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

} // namespace pwin::test
