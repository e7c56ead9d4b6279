#include "pwin/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pwin {

using nlohmann::json;

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > std::numeric_limits<std::uint64_t>::max() / b)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t factorial_saturated(size_t n) {
    std::uint64_t f = 1;
    for (size_t i = 2; i <= n; ++i) f = saturating_mul(f, i);
    return f;
}

// Members of a block ordered by candidate name.
std::vector<int> name_sorted(const std::vector<int>& block, const std::vector<std::string>& names) {
    std::vector<int> out = block;
    std::sort(out.begin(), out.end(), [&](int a, int b) {
        return names[static_cast<size_t>(a)] < names[static_cast<size_t>(b)];
    });
    return out;
}

} // namespace

ExtensionCursor::ExtensionCursor(const PartitionedVote& vote, const std::vector<std::string>& names,
                                 std::uint64_t per_vote_budget) {
    size_t offset = 0;
    for (const auto& block : vote.blocks) {
        block_base_.push_back(name_sorted(block, names));
        std::vector<int> ranks(block.size());
        for (size_t p = 0; p < ranks.size(); ++p) ranks[p] = static_cast<int>(p);
        block_perms_.push_back(std::move(ranks));
        block_offsets_.push_back(offset);
        offset += block.size();
        count_ = saturating_mul(count_, factorial_saturated(block.size()));
    }
    if (count_ > per_vote_budget)
        throw BudgetError("vote has " + std::to_string(count_) +
                          " extensions, exceeding the per-vote budget of " +
                          std::to_string(per_vote_budget));
    current_.resize(offset);
    rebuild_current();
}

void ExtensionCursor::rebuild_current() {
    for (size_t j = 0; j < block_perms_.size(); ++j)
        for (size_t p = 0; p < block_perms_[j].size(); ++p)
            current_[block_offsets_[j] + p] =
                block_base_[j][static_cast<size_t>(block_perms_[j][p])];
}

bool ExtensionCursor::advance() {
    // Odometer over blocks, last block fastest. Each block steps through the
    // permutations of its name-sorted members in lexicographic name order.
    for (size_t j = block_perms_.size(); j-- > 0;) {
        if (std::next_permutation(block_perms_[j].begin(), block_perms_[j].end())) {
            rebuild_current();
            return true;
        }
        // wrapped to the first permutation; carry to the previous block
    }
    rebuild_current();
    return false;
}

void ExtensionCursor::reset() {
    for (auto& p : block_perms_) std::sort(p.begin(), p.end());
    rebuild_current();
}

namespace {

// Canonical per-vote extensions: permutations whose equal-score runs are
// sorted ascending by name. Collapsing these loses no decision and no first
// witness, because every extension's canonical form is lexicographically no
// later and assigns identical scores.
struct VoteExtensions {
    std::vector<LinearOrder> orders;
    std::vector<std::vector<Score>> totals; // per extension, per candidate
};

VoteExtensions canonical_extensions(const PartitionedVote& vote, const ScoringVector& v,
                                    const std::vector<std::string>& names, int m,
                                    std::uint64_t per_vote_budget) {
    struct BlockChoices {
        size_t offset = 0;
        std::vector<std::vector<int>> perms;
    };
    std::vector<BlockChoices> blocks;
    size_t offset = 0;
    for (const auto& block : vote.blocks) {
        BlockChoices bc;
        bc.offset = offset;
        const std::vector<int> base = name_sorted(block, names);
        if (factorial_saturated(base.size()) > per_vote_budget)
            throw BudgetError("block of size " + std::to_string(base.size()) +
                              " exceeds the per-vote extension budget");
        // Equal-score runs inside this block's rank span.
        std::vector<int> seg(base.size(), 0);
        for (size_t p = 1; p < base.size(); ++p) {
            const Score here = v.at_rank(static_cast<int>(offset + p) + 1);
            const Score prev = v.at_rank(static_cast<int>(offset + p));
            seg[p] = seg[p - 1] + (here == prev ? 0 : 1);
        }
        std::vector<int> idx(base.size());
        for (size_t p = 0; p < idx.size(); ++p) idx[p] = static_cast<int>(p);
        auto by_name = [&](int a, int b) {
            return names[static_cast<size_t>(base[static_cast<size_t>(a)])] <
                   names[static_cast<size_t>(base[static_cast<size_t>(b)])];
        };
        do {
            bool canonical = true;
            for (size_t p = 1; p < idx.size() && canonical; ++p)
                if (seg[p] == seg[p - 1] && by_name(idx[p], idx[p - 1])) canonical = false;
            if (canonical) {
                std::vector<int> arranged(base.size());
                for (size_t p = 0; p < base.size(); ++p)
                    arranged[p] = base[static_cast<size_t>(idx[p])];
                bc.perms.push_back(std::move(arranged));
            }
        } while (std::next_permutation(idx.begin(), idx.end()));
        offset += block.size();
        blocks.push_back(std::move(bc));
    }

    std::uint64_t total = 1;
    for (const auto& bc : blocks) total = saturating_mul(total, bc.perms.size());
    if (total > per_vote_budget)
        throw BudgetError("vote exceeds the per-vote extension budget");

    VoteExtensions out;
    std::vector<size_t> pick(blocks.size(), 0);
    while (true) {
        LinearOrder order(static_cast<size_t>(vote.candidate_count()));
        for (size_t j = 0; j < blocks.size(); ++j)
            std::copy(blocks[j].perms[pick[j]].begin(), blocks[j].perms[pick[j]].end(),
                      order.begin() + static_cast<std::ptrdiff_t>(blocks[j].offset));
        std::vector<Score> t(static_cast<size_t>(m), 0);
        for (size_t r = 0; r < order.size(); ++r)
            t[static_cast<size_t>(order[r])] = v.at_rank(static_cast<int>(r) + 1);
        out.orders.push_back(std::move(order));
        out.totals.push_back(std::move(t));
        size_t j = blocks.size();
        while (j-- > 0) {
            if (++pick[j] < blocks[j].perms.size()) break;
            pick[j] = 0;
            if (j == 0) return out;
        }
    }
}

bool wins(const std::vector<Score>& totals, int c, WinnerMode mode) {
    const Score sc = totals[static_cast<size_t>(c)];
    for (size_t i = 0; i < totals.size(); ++i) {
        if (static_cast<int>(i) == c) continue;
        if (mode == WinnerMode::UniqueWinner ? totals[i] >= sc : totals[i] > sc) return false;
    }
    return true;
}

} // namespace

OracleResult decide_oracle(const ElectionInstance& instance, const OracleOptions& options) {
    validate_instance(instance);
    const int m = instance.m();
    const int c = instance.distinguished;
    const int n = instance.profile.size();

    if (m == 1) {
        OracleResult r;
        r.yes = true;
        r.witness = LinearProfile(static_cast<size_t>(n), LinearOrder{0});
        return r;
    }

    const ScoringVector v = instance.scoring_vector();
    std::vector<VoteExtensions> votes;
    votes.reserve(static_cast<size_t>(n));
    std::uint64_t joint = 1;
    for (const auto& vote : instance.profile.votes) {
        votes.push_back(
            canonical_extensions(vote, v, instance.candidates, m, options.max_per_vote));
        joint = saturating_mul(joint, votes.back().orders.size());
    }
    if (joint > options.max_joint)
        throw BudgetError("joint extension count " + std::to_string(joint) +
                          " exceeds the budget of " + std::to_string(options.max_joint));

    // Free votes genuinely branch; fixed ones contribute constant scores.
    std::vector<int> free_votes;
    std::vector<Score> base(static_cast<size_t>(m), 0);
    for (int i = 0; i < n; ++i) {
        if (votes[static_cast<size_t>(i)].orders.size() == 1) {
            const auto& t = votes[static_cast<size_t>(i)].totals[0];
            for (int a = 0; a < m; ++a) base[static_cast<size_t>(a)] += t[static_cast<size_t>(a)];
        } else {
            free_votes.push_back(i);
        }
    }

    // Per-candidate score ranges over the tail of the free votes, for the
    // optional pruning bound.
    std::vector<std::vector<Score>> min_rest, max_rest;
    if (options.prune) {
        const size_t f = free_votes.size();
        min_rest.assign(f + 1, std::vector<Score>(static_cast<size_t>(m), 0));
        max_rest.assign(f + 1, std::vector<Score>(static_cast<size_t>(m), 0));
        for (size_t j = f; j-- > 0;) {
            const auto& ext = votes[static_cast<size_t>(free_votes[j])];
            for (int a = 0; a < m; ++a) {
                Score lo = ext.totals[0][static_cast<size_t>(a)];
                Score hi = lo;
                for (const auto& t : ext.totals) {
                    lo = std::min(lo, t[static_cast<size_t>(a)]);
                    hi = std::max(hi, t[static_cast<size_t>(a)]);
                }
                min_rest[j][static_cast<size_t>(a)] = min_rest[j + 1][static_cast<size_t>(a)] + lo;
                max_rest[j][static_cast<size_t>(a)] = max_rest[j + 1][static_cast<size_t>(a)] + hi;
            }
        }
    }

    std::vector<size_t> chosen(free_votes.size(), 0);
    OracleResult result;

    auto emit_witness = [&]() {
        LinearProfile witness;
        witness.reserve(static_cast<size_t>(n));
        std::vector<size_t> pick(static_cast<size_t>(n), 0);
        for (size_t j = 0; j < free_votes.size(); ++j)
            pick[static_cast<size_t>(free_votes[j])] = chosen[j];
        for (int i = 0; i < n; ++i)
            witness.push_back(votes[static_cast<size_t>(i)].orders[pick[static_cast<size_t>(i)]]);
        result.witness = std::move(witness);
    };

    std::vector<Score> totals = base;
    auto search = [&](auto&& self, size_t level) -> bool {
        if (options.prune) {
            const Score c_best =
                totals[static_cast<size_t>(c)] + max_rest[level][static_cast<size_t>(c)];
            for (int a = 0; a < m; ++a) {
                if (a == c) continue;
                const Score a_floor =
                    totals[static_cast<size_t>(a)] + min_rest[level][static_cast<size_t>(a)];
                if (instance.mode == WinnerMode::UniqueWinner ? a_floor >= c_best
                                                              : a_floor > c_best)
                    return false;
            }
        }
        if (level == free_votes.size()) {
            if (wins(totals, c, instance.mode)) {
                result.yes = true;
                emit_witness();
                return true;
            }
            return false;
        }
        const auto& ext = votes[static_cast<size_t>(free_votes[level])];
        for (size_t e = 0; e < ext.orders.size(); ++e) {
            chosen[level] = e;
            for (int a = 0; a < m; ++a)
                totals[static_cast<size_t>(a)] += ext.totals[e][static_cast<size_t>(a)];
            const bool found = self(self, level + 1);
            for (int a = 0; a < m; ++a)
                totals[static_cast<size_t>(a)] -= ext.totals[e][static_cast<size_t>(a)];
            if (found) return true;
        }
        return false;
    };
    search(search, 0);
    return result;
}

std::uint64_t joint_extension_count(const ElectionInstance& instance, bool collapsed) {
    validate_instance(instance);
    if (instance.m() == 1) return 1;
    const ScoringVector v = instance.scoring_vector();
    std::uint64_t joint = 1;
    for (const auto& vote : instance.profile.votes) {
        int offset = 0;
        for (const auto& block : vote.blocks) {
            std::uint64_t per_block = factorial_saturated(block.size());
            if (collapsed) {
                // Divide out the factorial of every equal-score run of the
                // block's rank span.
                size_t run = 1;
                for (size_t p = 1; p <= block.size(); ++p) {
                    if (p < block.size() &&
                        v.at_rank(offset + static_cast<int>(p) + 1) ==
                            v.at_rank(offset + static_cast<int>(p))) {
                        ++run;
                        continue;
                    }
                    per_block /= factorial_saturated(run);
                    run = 1;
                }
            }
            joint = saturating_mul(joint, per_block);
            offset += static_cast<int>(block.size());
        }
    }
    return joint;
}

void ThreeDMInstance::validate() const {
    const size_t M = xs.size();
    if (M == 0 || ys.size() != M || zs.size() != M)
        throw ValidationError("3DM axis sets must be non-empty and of equal size");
    std::set<std::string> names;
    for (const auto* axis : {&xs, &ys, &zs})
        for (const auto& e : *axis) {
            if (e.empty()) throw ValidationError("3DM element name is empty");
            if (!names.insert(e).second)
                throw ValidationError("3DM element " + e + " appears twice");
        }
    std::set<std::array<int, 3>> seen;
    for (const auto& t : triples) {
        for (int a = 0; a < 3; ++a)
            if (t[static_cast<size_t>(a)] < 0 || t[static_cast<size_t>(a)] >= static_cast<int>(M))
                throw ValidationError("3DM triple index out of range");
        if (!seen.insert(t).second) throw ValidationError("3DM triple listed twice");
    }
}

ThreeDMResult solve_3dm(const ThreeDMInstance& instance, std::uint64_t budget) {
    instance.validate();
    const int M = instance.m_size();
    const int S = static_cast<int>(instance.triples.size());
    ThreeDMResult result;
    if (S < M) return result;

    std::uint64_t combos = 1;
    for (int j = 0; j < M; ++j)
        combos = saturating_mul(combos, static_cast<std::uint64_t>(S - j));
    // Overcounts by M! which only helps the guard.
    if (combos > budget)
        throw BudgetError("3DM search space exceeds the budget of " + std::to_string(budget));

    std::vector<int> pick;
    std::vector<char> used_x(static_cast<size_t>(M), 0), used_y(used_x), used_z(used_x);
    auto rec = [&](auto&& self, int from) -> bool {
        if (static_cast<int>(pick.size()) == M) {
            result.yes = true;
            result.matching = pick;
            return true;
        }
        for (int t = from; t < S; ++t) {
            const auto& tr = instance.triples[static_cast<size_t>(t)];
            if (used_x[static_cast<size_t>(tr[0])] || used_y[static_cast<size_t>(tr[1])] ||
                used_z[static_cast<size_t>(tr[2])])
                continue;
            used_x[static_cast<size_t>(tr[0])] = used_y[static_cast<size_t>(tr[1])] =
                used_z[static_cast<size_t>(tr[2])] = 1;
            pick.push_back(t);
            if (self(self, t + 1)) return true;
            pick.pop_back();
            used_x[static_cast<size_t>(tr[0])] = used_y[static_cast<size_t>(tr[1])] =
                used_z[static_cast<size_t>(tr[2])] = 0;
        }
        return false;
    };
    rec(rec, 0);
    return result;
}

ThreeDMInstance parse_3dm(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    ThreeDMInstance instance;
    try {
        for (const auto& e : j.at("X")) instance.xs.push_back(e.get<std::string>());
        for (const auto& e : j.at("Y")) instance.ys.push_back(e.get<std::string>());
        for (const auto& e : j.at("Z")) instance.zs.push_back(e.get<std::string>());
        auto index_of = [](const std::vector<std::string>& axis, const std::string& name) {
            for (size_t i = 0; i < axis.size(); ++i)
                if (axis[i] == name) return static_cast<int>(i);
            throw ParseError("3DM triple element " + name + " is not on the expected axis");
        };
        for (const auto& jt : j.at("S")) {
            if (!jt.is_array() || jt.size() != 3)
                throw ParseError("3DM triples must be 3-element arrays");
            instance.triples.push_back({index_of(instance.xs, jt[0].get<std::string>()),
                                        index_of(instance.ys, jt[1].get<std::string>()),
                                        index_of(instance.zs, jt[2].get<std::string>())});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("3DM schema: ") + e.what());
    }
    instance.validate();
    return instance;
}

std::string serialize_3dm(const ThreeDMInstance& instance) {
    json j;
    j["X"] = instance.xs;
    j["Y"] = instance.ys;
    j["Z"] = instance.zs;
    json s = json::array();
    for (const auto& t : instance.triples)
        s.push_back({instance.xs[static_cast<size_t>(t[0])], instance.ys[static_cast<size_t>(t[1])],
                     instance.zs[static_cast<size_t>(t[2])]});
    j["S"] = std::move(s);
    return j.dump(2);
}

ThreeDMInstance load_3dm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_3dm(buf.str());
}

} // namespace pwin
