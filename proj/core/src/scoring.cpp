#include "pwin/scoring.hpp"

#include <algorithm>
#include <numeric>

#include "pwin/model.hpp"

namespace pwin {

void ScoringVector::validate() const {
    if (entries.empty()) throw ValidationError("scoring vector is empty");
    for (const Score s : entries) {
        if (s < 0) throw ValidationError("scoring vector has a negative entry");
    }
    for (size_t i = 1; i < entries.size(); ++i) {
        if (entries[i] > entries[i - 1])
            throw ValidationError("scoring vector is not non-increasing at rank " +
                                  std::to_string(i + 1));
    }
    if (entries.size() >= 2 && entries.front() == entries.back())
        throw ValidationError("scoring vector must have first entry > last entry");
}

RuleFamily RuleFamily::k_approval(int k) {
    if (k < 1) throw ValidationError("k-approval requires k >= 1");
    RuleFamily f{Kind::KApproval};
    f.k = k;
    return f;
}

RuleFamily RuleFamily::explicit_table(std::map<int, ScoringVector> t) {
    RuleFamily f{Kind::ExplicitTable};
    f.table = std::move(t);
    return f;
}

RuleFamily RuleFamily::lemma6_template(int i, int k, Score a) {
    RuleFamily f{Kind::Lemma6Template};
    f.anchor = i;
    f.k = k;
    f.run_value = a;
    return f;
}

RuleFamily RuleFamily::lemma7_template(int i, int k, int l) {
    RuleFamily f{Kind::Lemma7Template};
    f.anchor = i;
    f.k = k;
    f.run_l = l;
    return f;
}

std::string RuleFamily::name() const {
    switch (kind) {
        case Kind::Plurality: return "plurality";
        case Kind::Veto: return "veto";
        case Kind::KApproval: return "k-approval";
        case Kind::Borda: return "borda";
        case Kind::TwoOneZero: return "two-one-zero";
        case Kind::ExplicitTable: return "explicit-table";
        case Kind::Lemma6Template: return "lemma6-template";
        case Kind::Lemma7Template: return "lemma7-template";
    }
    return "?";
}

ScoringVector score_vector(const RuleFamily& family, int m) {
    if (m < 2) throw ValidationError("rule families are defined for m >= 2");
    std::vector<Score> v(static_cast<size_t>(m), 0);
    switch (family.kind) {
        case RuleFamily::Kind::Plurality:
            v[0] = 1;
            break;
        case RuleFamily::Kind::Veto:
            std::fill(v.begin(), v.end() - 1, 1);
            break;
        case RuleFamily::Kind::KApproval:
            if (family.k > m - 1)
                throw ValidationError("k-approval requires k <= m-1, got k=" +
                                      std::to_string(family.k) + " m=" + std::to_string(m));
            std::fill(v.begin(), v.begin() + family.k, 1);
            break;
        case RuleFamily::Kind::Borda:
            for (int r = 0; r < m; ++r) v[static_cast<size_t>(r)] = m - 1 - r;
            break;
        case RuleFamily::Kind::TwoOneZero:
            if (m < 3) throw ValidationError("(2,1,...,1,0) requires m >= 3");
            v[0] = 2;
            std::fill(v.begin() + 1, v.end() - 1, 1);
            break;
        case RuleFamily::Kind::ExplicitTable: {
            auto it = family.table.find(m);
            if (it == family.table.end())
                throw ValidationError("explicit rule table has no vector for m=" +
                                      std::to_string(m));
            ScoringVector sv = it->second;
            sv.validate();
            return sv;
        }
        case RuleFamily::Kind::Lemma6Template: {
            // Bottom-up: unit descent to 0 below the anchor, a k-run of the
            // value a, then unit ascent from a+1 to the top.
            const int i = family.anchor;
            const int k = family.k;
            const Score a = family.run_value;
            if (i < 2 || k < 1 || a < 1)
                throw ValidationError("lemma6-template requires i >= 2, k >= 1, a >= 1");
            if (a > i - 1)
                throw ValidationError("lemma6-template requires a <= i-1 to reach score 0");
            if (m < i + k)
                throw ValidationError("lemma6-template requires m >= i+k");
            for (int p = 1; p <= m; ++p) { // bottom-up position
                Score s;
                if (p < i)
                    s = std::max<Score>(0, a - 1 - (i - 1 - p));
                else if (p < i + k)
                    s = a;
                else
                    s = a + 1 + (p - (i + k));
                v[static_cast<size_t>(m - p)] = s;
            }
            break;
        }
        case RuleFamily::Kind::Lemma7Template: {
            // Bottom-up: unit descent to 0 below the anchor, an l-run at the
            // anchor, a k-run one step up, then a unit ascent to the top.
            const int i = family.anchor;
            const int k = family.k;
            const int l = family.run_l;
            if (i < 1 || k < 1 || l < 1)
                throw ValidationError("lemma7-template requires i >= 1, k >= 1, l >= 1");
            if (m < i + l + k)
                throw ValidationError("lemma7-template requires m >= i+l+k");
            const Score run = i - 1; // unit descent below the run reaches 0
            for (int p = 1; p <= m; ++p) {
                Score s;
                if (p < i)
                    s = p - 1;
                else if (p < i + l)
                    s = run;
                else if (p < i + l + k)
                    s = run + 1;
                else
                    s = run + 2 + (p - (i + l + k));
                v[static_cast<size_t>(m - p)] = s;
            }
            break;
        }
    }
    ScoringVector sv{std::move(v)};
    sv.validate();
    return sv;
}

ScoringVector normalize(const ScoringVector& v) {
    v.validate();
    if (v.size() == 1) return v;
    const Score low = v.entries.back();
    std::vector<Score> out;
    out.reserve(v.entries.size());
    Score g = 0;
    for (const Score s : v.entries) {
        out.push_back(s - low);
        g = std::gcd(g, s - low);
    }
    // g > 0: the first entry is strictly above the last.
    for (Score& s : out) s /= g;
    return ScoringVector{std::move(out)};
}

RuleClassification classify(const ScoringVector& v) {
    v.validate();
    const int m = v.size();
    RuleClassification c;

    std::vector<Score> sorted = v.entries;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    c.distinct_values = static_cast<int>(sorted.size());

    if (c.distinct_values == 2) {
        int k = 0;
        while (k < m && v.entries[static_cast<size_t>(k)] == v.entries[0]) ++k;
        c.two_valued_k = k;
    }

    c.is_two_one_zero = m >= 3 && v.entries.front() == 2 && v.entries.back() == 0 &&
                        std::all_of(v.entries.begin() + 1, v.entries.end() - 1,
                                    [](Score s) { return s == 1; });

    int run = 1, best = 1;
    for (int r = 1; r < m; ++r) {
        run = (v.entries[static_cast<size_t>(r)] == v.entries[static_cast<size_t>(r - 1)])
                  ? run + 1
                  : 1;
        best = std::max(best, run);
    }
    c.max_equal_run = best;

    // Bottom-up gaps: gap(p) = value(p) - value(p-1) for p in [2, m]. The
    // vector is differentiating when a value boundary q sits more than one
    // position above a smaller value boundary p. Only genuine boundaries
    // (positive gaps) count; interior zero gaps of a run do not qualify as
    // the smaller side.
    auto gap = [&](int p) { return v.at_bottom_up(p) - v.at_bottom_up(p - 1); };
    for (int q = 4; q <= m && !c.is_differentiating; ++q)
        for (int p = 2; p <= q - 2; ++p)
            if (gap(p) > 0 && gap(q) > gap(p)) {
                c.is_differentiating = true;
                break;
            }
    return c;
}

ScoringVector Rule::resolve(int m) const {
    if (vector) {
        if (vector->size() != m)
            throw ValidationError("rule vector has length " + std::to_string(vector->size()) +
                                  " but the instance has " + std::to_string(m) + " candidates");
        if (m >= 2) vector->validate();
        return *vector;
    }
    if (family) return score_vector(*family, m);
    throw ValidationError("rule is empty");
}

Score s_max_vote(const PartitionedVote& o, int c, const ScoringVector& v) {
    int above = 0;
    for (const auto& block : o.blocks) {
        if (std::binary_search(block.begin(), block.end(), c))
            return v.at_rank(above + 1);
        above += static_cast<int>(block.size());
    }
    throw ValidationError("candidate index " + std::to_string(c) + " not in vote");
}

Score s_min_vote(const PartitionedVote& o, int c, const ScoringVector& v) {
    int above = 0;
    for (const auto& block : o.blocks) {
        if (std::binary_search(block.begin(), block.end(), c))
            return v.at_rank(above + static_cast<int>(block.size()));
        above += static_cast<int>(block.size());
    }
    throw ValidationError("candidate index " + std::to_string(c) + " not in vote");
}

Score s_max_profile(const Profile& o, int c, const ScoringVector& v) {
    Score total = 0;
    for (const auto& vote : o.votes) total += s_max_vote(vote, c, v);
    return total;
}

PartitionedVote fix_distinguished(const PartitionedVote& o, int c) {
    PartitionedVote out;
    for (const auto& block : o.blocks) {
        if (std::binary_search(block.begin(), block.end(), c)) {
            out.blocks.push_back({c});
            if (block.size() > 1) {
                std::vector<int> rest;
                rest.reserve(block.size() - 1);
                for (int x : block)
                    if (x != c) rest.push_back(x);
                out.blocks.push_back(std::move(rest));
            }
        } else {
            out.blocks.push_back(block);
        }
    }
    return out;
}

Profile fix_distinguished(const Profile& o, int c) {
    Profile out;
    out.votes.reserve(o.votes.size());
    for (const auto& vote : o.votes) out.votes.push_back(fix_distinguished(vote, c));
    return out;
}

std::vector<Score> score_linear_profile(const std::vector<std::vector<int>>& votes, int m,
                                        const ScoringVector& v) {
    std::vector<Score> totals(static_cast<size_t>(m), 0);
    for (const auto& vote : votes)
        for (size_t r = 0; r < vote.size(); ++r)
            totals[static_cast<size_t>(vote[r])] += v.at_rank(static_cast<int>(r) + 1);
    return totals;
}

} // namespace pwin
