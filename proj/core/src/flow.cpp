#include "pwin/flow.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>

namespace pwin {

namespace {

std::vector<int> name_sorted(std::vector<int> v, const std::vector<std::string>& names) {
    std::sort(v.begin(), v.end(), [&](int a, int b) {
        return names[static_cast<size_t>(a)] < names[static_cast<size_t>(b)];
    });
    return v;
}

} // namespace

Score FlowNetwork::sink_capacity_total() const {
    Score total = 0;
    for (const auto& a : arcs)
        if (a.to == sink) total += a.capacity;
    return total;
}

VoteLossStructure two_one_zero_losses(const PartitionedVote& o, int c, int m) {
    if (m < 3) throw ValidationError("(2,1,...,1,0) requires m >= 3");
    const PartitionedVote fixed = fix_distinguished(o, c);
    const ScoringVector v = score_vector(RuleFamily::two_one_zero(), m);

    VoteLossStructure out;
    out.max_score.assign(static_cast<size_t>(m), 0);
    for (const auto& block : fixed.blocks)
        for (int a : block) out.max_score[static_cast<size_t>(a)] = s_max_vote(fixed, a, v);

    // Top: one first-block member keeps the 2; the rest drop to 1. Absent
    // when c holds rank 1 (then the drop is already in max_score).
    const auto& first = fixed.blocks.front();
    if (!(first.size() == 1 && first[0] == c)) {
        VoteLossStructure::Node top;
        top.capacity = static_cast<Score>(first.size()) - 1;
        top.members = first;
        out.top = std::move(top);
    }

    // Bottom: whoever lands on rank m drops to 0. Absent when rank m's
    // occupant is forced (singleton last block), which max_score covers.
    const auto& last = fixed.blocks.back();
    if (last.size() >= 2) {
        VoteLossStructure::Node bottom;
        bottom.capacity = 1;
        bottom.members = last;
        out.bottom = std::move(bottom);
    }
    return out;
}

FlowNetwork build_network(const ElectionInstance& instance) {
    validate_instance(instance);
    const int m = instance.m();
    const int c = instance.distinguished;
    if (m < 2) throw UnsupportedRuleError("flow decision requires at least 2 candidates");

    const ScoringVector v = normalize(instance.scoring_vector());
    const RuleClassification cls = classify(v);

    FlowNetwork net;
    net.fixed_profile = fix_distinguished(instance.profile, c);

    std::vector<Score> smax(static_cast<size_t>(m), 0);
    if (cls.distinct_values == 2) {
        net.approval_k = *cls.two_valued_k;
        for (int a = 0; a < m; ++a) smax[static_cast<size_t>(a)] = s_max_profile(instance.profile, a, v);
    } else if (cls.is_two_one_zero) {
        net.approval_k = 0;
        for (int a = 0; a < m; ++a)
            smax[static_cast<size_t>(a)] = s_max_profile(net.fixed_profile, a, v);
    } else {
        throw UnsupportedRuleError(
            "flow decision supports 2-valued rules and (2,1,...,1,0); this rule is neither");
    }

    const Score bonus = instance.mode == WinnerMode::UniqueWinner ? 1 : 0;
    net.deficit.assign(static_cast<size_t>(m), 0);
    net.candidate_node.assign(static_cast<size_t>(m), -1);
    net.node_count = 2;
    for (int a = 0; a < m; ++a) {
        if (a == c) continue;
        const Score d = smax[static_cast<size_t>(a)] - smax[static_cast<size_t>(c)] + bonus;
        if (d > 0) {
            net.deficit[static_cast<size_t>(a)] = d;
            net.candidate_node[static_cast<size_t>(a)] = net.node_count++;
            net.target += d;
        }
    }

    // Loss nodes per vote, then arcs in layer order.
    const int n = instance.profile.size();
    for (int i = 0; i < n; ++i) {
        if (net.approval_k > 0) {
            // The single block of the input vote that spans rank k.
            const auto& blocks = instance.profile.votes[static_cast<size_t>(i)].blocks;
            int cum = 0;
            for (const auto& block : blocks) {
                const int lo = cum + 1;
                cum += static_cast<int>(block.size());
                if (lo <= net.approval_k && net.approval_k <= cum) {
                    FlowNetwork::LossNode ln;
                    ln.node = net.node_count++;
                    ln.vote = i;
                    ln.kind = FlowNetwork::LossKind::KApprovalBlock;
                    ln.sink_capacity = cum - net.approval_k;
                    for (int a : block)
                        if (a != c) ln.members.push_back(a);
                    net.loss_nodes.push_back(std::move(ln));
                    break;
                }
            }
        } else {
            const VoteLossStructure losses =
                two_one_zero_losses(instance.profile.votes[static_cast<size_t>(i)], c, m);
            if (losses.top) {
                FlowNetwork::LossNode ln;
                ln.node = net.node_count++;
                ln.vote = i;
                ln.kind = FlowNetwork::LossKind::TopLoss;
                ln.sink_capacity = losses.top->capacity;
                ln.members = losses.top->members;
                net.loss_nodes.push_back(std::move(ln));
            }
            if (losses.bottom) {
                FlowNetwork::LossNode ln;
                ln.node = net.node_count++;
                ln.vote = i;
                ln.kind = FlowNetwork::LossKind::BottomLoss;
                ln.sink_capacity = losses.bottom->capacity;
                ln.members = losses.bottom->members;
                net.loss_nodes.push_back(std::move(ln));
            }
        }
    }

    for (int a = 0; a < m; ++a)
        if (net.candidate_node[static_cast<size_t>(a)] >= 0)
            net.arcs.push_back({net.source, net.candidate_node[static_cast<size_t>(a)],
                                net.deficit[static_cast<size_t>(a)]});
    for (const auto& ln : net.loss_nodes)
        for (int a : ln.members)
            if (net.candidate_node[static_cast<size_t>(a)] >= 0)
                net.arcs.push_back({net.candidate_node[static_cast<size_t>(a)], ln.node, 1});
    for (const auto& ln : net.loss_nodes) net.arcs.push_back({ln.node, net.sink, ln.sink_capacity});

    return net;
}

namespace {

// Dinic with a deterministic arc order.
struct Dinic {
    struct Edge {
        int to;
        Score cap;
        int rev;
    };
    std::vector<std::vector<Edge>> g;
    std::vector<int> level, iter;

    explicit Dinic(int n) : g(static_cast<size_t>(n)), level(static_cast<size_t>(n)),
                            iter(static_cast<size_t>(n)) {}

    std::pair<int, int> add_edge(int from, int to, Score cap) {
        g[static_cast<size_t>(from)].push_back({to, cap, static_cast<int>(g[static_cast<size_t>(to)].size())});
        g[static_cast<size_t>(to)].push_back({from, 0, static_cast<int>(g[static_cast<size_t>(from)].size()) - 1});
        return {from, static_cast<int>(g[static_cast<size_t>(from)].size()) - 1};
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        level[static_cast<size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (const Edge& e : g[static_cast<size_t>(u)])
                if (e.cap > 0 && level[static_cast<size_t>(e.to)] < 0) {
                    level[static_cast<size_t>(e.to)] = level[static_cast<size_t>(u)] + 1;
                    q.push(e.to);
                }
        }
        return level[static_cast<size_t>(t)] >= 0;
    }

    Score dfs(int u, int t, Score f) {
        if (u == t) return f;
        for (int& i = iter[static_cast<size_t>(u)];
             i < static_cast<int>(g[static_cast<size_t>(u)].size()); ++i) {
            Edge& e = g[static_cast<size_t>(u)][static_cast<size_t>(i)];
            if (e.cap > 0 && level[static_cast<size_t>(u)] < level[static_cast<size_t>(e.to)]) {
                const Score d = dfs(e.to, t, std::min(f, e.cap));
                if (d > 0) {
                    e.cap -= d;
                    g[static_cast<size_t>(e.to)][static_cast<size_t>(e.rev)].cap += d;
                    return d;
                }
            }
        }
        return 0;
    }

    Score run(int s, int t) {
        Score flow = 0;
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (Score f = dfs(s, t, std::numeric_limits<Score>::max())) flow += f;
        }
        return flow;
    }
};

} // namespace

FlowResult max_flow(const FlowNetwork& net) {
    Dinic dinic(net.node_count);
    std::vector<std::pair<int, int>> handles;
    handles.reserve(net.arcs.size());
    for (const auto& a : net.arcs) handles.push_back(dinic.add_edge(a.from, a.to, a.capacity));

    FlowResult result;
    result.value = dinic.run(net.source, net.sink);
    result.arc_flow.reserve(net.arcs.size());
    for (size_t i = 0; i < net.arcs.size(); ++i) {
        const auto [u, pos] = handles[i];
        const Score residual = dinic.g[static_cast<size_t>(u)][static_cast<size_t>(pos)].cap;
        result.arc_flow.push_back(net.arcs[i].capacity - residual);
    }
    return result;
}

LinearProfile extract_witness(const FlowNetwork& net, const FlowResult& flow,
                              const ElectionInstance& instance) {
    if (flow.value != net.target)
        throw ValidationError("witness extraction requires a flow meeting the target");

    // flowed[vote] = candidates that shed a point in that vote.
    std::vector<std::vector<int>> flowed(net.fixed_profile.votes.size());
    std::vector<int> node_vote(static_cast<size_t>(net.node_count), -1);
    for (const auto& ln : net.loss_nodes) node_vote[static_cast<size_t>(ln.node)] = ln.vote;
    std::vector<int> node_candidate(static_cast<size_t>(net.node_count), -1);
    for (int a = 0; a < instance.m(); ++a)
        if (net.candidate_node[static_cast<size_t>(a)] >= 0)
            node_candidate[static_cast<size_t>(net.candidate_node[static_cast<size_t>(a)])] = a;
    for (size_t i = 0; i < net.arcs.size(); ++i) {
        const auto& a = net.arcs[i];
        if (a.from == net.source || a.to == net.sink) continue;
        if (flow.arc_flow[i] > 0)
            flowed[static_cast<size_t>(node_vote[static_cast<size_t>(a.to)])].push_back(
                node_candidate[static_cast<size_t>(a.from)]);
    }

    LinearProfile witness;
    witness.reserve(net.fixed_profile.votes.size());
    for (size_t i = 0; i < net.fixed_profile.votes.size(); ++i) {
        LinearOrder order;
        for (const auto& block : net.fixed_profile.votes[i].blocks) {
            std::vector<int> shed, keep;
            for (int a : block) {
                if (std::find(flowed[i].begin(), flowed[i].end(), a) != flowed[i].end())
                    shed.push_back(a);
                else
                    keep.push_back(a);
            }
            // Shedders take the block's last positions; those are exactly the
            // zero-gaining ranks the flow reserved for them.
            for (int a : name_sorted(keep, instance.candidates)) order.push_back(a);
            for (int a : name_sorted(shed, instance.candidates)) order.push_back(a);
        }
        witness.push_back(std::move(order));
    }
    return witness;
}

FlowDecision decide_flow(const ElectionInstance& instance) {
    validate_instance(instance);
    FlowDecision decision;
    if (instance.m() == 1) {
        decision.yes = true;
        decision.witness =
            LinearProfile(static_cast<size_t>(instance.profile.size()), LinearOrder{0});
        return decision;
    }

    const FlowNetwork net = build_network(instance);
    decision.target = net.target;

    // Necessary condition: the sink cannot absorb more than its capacity.
    const bool capacity_ok = net.target <= net.sink_capacity_total();

    const FlowResult flow = max_flow(net);
    decision.max_flow_value = flow.value;
    decision.yes = flow.value == net.target;
    assert(capacity_ok || !decision.yes);
    (void)capacity_ok;

    if (decision.yes) {
        LinearProfile witness = extract_witness(net, flow, instance);
        const std::vector<Score> totals =
            score_linear_profile(witness, instance.m(), instance.scoring_vector());
        const Score sc = totals[static_cast<size_t>(instance.distinguished)];
        for (int a = 0; a < instance.m(); ++a) {
            if (a == instance.distinguished) continue;
            const bool ok = instance.mode == WinnerMode::UniqueWinner
                                ? totals[static_cast<size_t>(a)] < sc
                                : totals[static_cast<size_t>(a)] <= sc;
            if (!ok)
                throw Error("internal: extracted witness does not satisfy the mode condition");
        }
        decision.witness = std::move(witness);
    }
    return decision;
}

} // namespace pwin
