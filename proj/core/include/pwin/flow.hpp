#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pwin/model.hpp"

namespace pwin {

// Source / candidate layer / loss-node layer / sink network whose max flow
// decides the possible-winner question for k-approval (all normalized
// 2-valued rules) and (2,1,...,1,0).
struct FlowNetwork {
    struct Arc {
        int from = 0;
        int to = 0;
        Score capacity = 0;
    };

    enum class LossKind { KApprovalBlock, TopLoss, BottomLoss };

    // One sink-side node: the positions of one vote where a unit of score
    // can be shed. `members` are the candidates eligible to shed it there.
    struct LossNode {
        int node = 0;
        int vote = 0;
        LossKind kind = LossKind::KApprovalBlock;
        Score sink_capacity = 0;
        std::vector<int> members;
    };

    int node_count = 0;
    int source = 0;
    int sink = 1;
    std::vector<Arc> arcs;

    std::vector<int> candidate_node;  // candidate index -> node id, -1 if absent
    std::vector<Score> deficit;       // required loss per candidate (<=0 omitted)
    Score target = 0;
    std::vector<LossNode> loss_nodes;

    // Profile the witness must extend (distinguished candidate already fixed
    // to the top of its block in every vote).
    Profile fixed_profile;
    int approval_k = 0; // 0 for the (2,1,...,1,0) construction

    Score sink_capacity_total() const;
};

struct FlowResult {
    Score value = 0;
    std::vector<Score> arc_flow; // aligned with FlowNetwork::arcs
};

// Per-vote loss structure for the (2,1,...,1,0) rule after the distinguished
// candidate has been fixed: who can shed a point, and where.
struct VoteLossStructure {
    struct Node {
        Score capacity = 0;
        std::vector<int> members;
    };
    std::optional<Node> top;    // first-block members dropping 2 -> 1
    std::optional<Node> bottom; // last-block members dropping 1 -> 0
    std::vector<Score> max_score; // per-candidate maximum in the fixed vote
};

VoteLossStructure two_one_zero_losses(const PartitionedVote& o, int c, int m);

// Builds the decision network. Throws UnsupportedRuleError unless the rule
// normalizes to k-approval or matches (2,1,...,1,0).
FlowNetwork build_network(const ElectionInstance& instance);

// Deterministic blocking-flow (Dinic) maximum flow; integral on integral
// capacities.
FlowResult max_flow(const FlowNetwork& net);

struct FlowDecision {
    bool yes = false;
    Score target = 0;
    Score max_flow_value = 0;
    std::optional<LinearProfile> witness;
};

// Full decision procedure: network, max flow, and on yes a complete witness
// profile that re-scores to the mode's condition.
FlowDecision decide_flow(const ElectionInstance& instance);

// Turns a target-valued flow into a complete profile extending the fixed
// profile. Candidates that pushed flow into a loss node are placed at the
// zero-gaining positions of that vote; everyone else fills the remaining
// ranks in lexicographic order.
LinearProfile extract_witness(const FlowNetwork& net, const FlowResult& flow,
                              const ElectionInstance& instance);

} // namespace pwin
