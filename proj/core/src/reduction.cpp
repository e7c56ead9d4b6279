#include "pwin/reduction.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"

namespace pwin {

using nlohmann::json;

namespace {

struct Egcd {
    Score g, x, y; // g = x*a + y*b
};

Egcd egcd(Score a, Score b) {
    if (b == 0) return {a, 1, 0};
    const Egcd e = egcd(b, a % b);
    return {e.g, e.y, e.x - (a / b) * e.y};
}

// Distinct positive gaps of the vector (top-down), each with the first
// boundary position carrying it, plus Bezout coefficients combining the gaps
// to 1.
struct GapBasis {
    std::vector<Score> gaps;
    std::vector<int> boundary;  // 0-based top-down position b with v[b]-v[b+1] == gap
    std::vector<Score> coeff;   // sum(coeff * gaps) == 1
};

GapBasis gap_basis(const ScoringVector& v) {
    GapBasis basis;
    for (int b = 0; b + 1 < v.size(); ++b) {
        const Score g = v.entries[static_cast<size_t>(b)] - v.entries[static_cast<size_t>(b + 1)];
        if (g > 0 && std::find(basis.gaps.begin(), basis.gaps.end(), g) == basis.gaps.end()) {
            basis.gaps.push_back(g);
            basis.boundary.push_back(b);
        }
    }
    if (basis.gaps.empty()) throw ValidationError("scoring vector has no score gap");
    Score running = basis.gaps[0];
    basis.coeff.assign(basis.gaps.size(), 0);
    basis.coeff[0] = 1;
    for (size_t j = 1; j < basis.gaps.size() && running != 1; ++j) {
        const Egcd e = egcd(running, basis.gaps[j]);
        for (size_t t = 0; t < j; ++t) basis.coeff[t] *= e.x;
        basis.coeff[j] = e.y;
        running = e.g;
    }
    if (running != 1)
        throw ValidationError("score gaps are not coprime; the vector is not normalized");
    return basis;
}

std::vector<std::string> sorted_names(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

Score adjustment_bezout_weight(const ScoringVector& v) {
    const GapBasis basis = gap_basis(v);
    Score a = 0;
    for (const Score c : basis.coeff) a += c < 0 ? -c : c;
    return a;
}

AdjustmentProfile build_adjustment_profile(const AdjustmentTarget& target, const ScoringVector& v) {
    v.validate();
    if (v.entries.back() != 0)
        throw ValidationError("adjustment profile requires a normalized vector (last entry 0)");
    if (target.named.empty()) throw ValidationError("adjustment target has no named candidates");
    if (target.dummies.empty()) throw ValidationError("adjustment target requires a dummy");
    if (target.offsets.size() != target.named.size())
        throw ValidationError("offsets must align with the named candidates");

    AdjustmentProfile out;
    out.candidates = target.named;
    out.candidates.insert(out.candidates.end(), target.dummies.begin(), target.dummies.end());
    {
        std::set<std::string> uniq(out.candidates.begin(), out.candidates.end());
        if (uniq.size() != out.candidates.size())
            throw ValidationError("adjustment candidates must be distinct");
    }
    const int total_n = static_cast<int>(out.candidates.size());
    if (v.size() != total_n)
        throw ValidationError("vector length must equal named + dummy count");

    const GapBasis basis = gap_basis(v);
    const int absorber = static_cast<int>(target.named.size()); // first dummy

    // Shift all offsets so every transfer is positive toward a named
    // candidate; the shift folds into lambda.
    const Score min_offset = *std::min_element(target.offsets.begin(), target.offsets.end());
    const Score delta = std::max<Score>(1, 1 - min_offset);

    Score vector_total = 0;
    for (const Score s : v.entries) vector_total += s;

    // One rotation familiy per unit transfer: all candidates collect the
    // full vector total, except one adjacent pair swapped across the chosen
    // boundary in exactly one rotation.
    auto emit_rotation_set = [&](int named_index, int boundary, bool gain) {
        std::vector<int> base;
        base.reserve(static_cast<size_t>(total_n));
        if (gain) {
            base.push_back(absorber);
            base.push_back(named_index);
        } else {
            base.push_back(named_index);
            base.push_back(absorber);
        }
        for (int a = 0; a < total_n; ++a)
            if (a != named_index && a != absorber) base.push_back(a);

        const int swap_rotation = (total_n - boundary % total_n) % total_n;
        for (int r = 0; r < total_n; ++r) {
            LinearOrder vote(static_cast<size_t>(total_n));
            for (int q = 0; q < total_n; ++q)
                vote[static_cast<size_t>(q)] = base[static_cast<size_t>((q + r) % total_n)];
            if (r == swap_rotation)
                std::swap(vote[static_cast<size_t>(boundary)],
                          vote[static_cast<size_t>(boundary + 1)]);
            out.votes.push_back(std::move(vote));
        }
    };

    Score sets = 0;
    for (size_t i = 0; i < target.named.size(); ++i) {
        const Score adjusted = target.offsets[i] + delta; // >= 1
        for (size_t j = 0; j < basis.gaps.size(); ++j) {
            const Score t = adjusted * basis.coeff[j];
            for (Score u = 0; u < (t < 0 ? -t : t); ++u)
                emit_rotation_set(static_cast<int>(i), basis.boundary[j], t > 0);
            sets += t < 0 ? -t : t;
        }
    }
    out.lambda = sets * vector_total + delta;

    // The construction is exact by design; re-score to hold it to that.
    const std::vector<Score> totals = score_linear_profile(out.votes, total_n, v);
    for (size_t i = 0; i < target.named.size(); ++i)
        if (totals[i] != out.lambda + target.offsets[i])
            throw Error("internal: adjustment profile missed a named target");
    for (size_t d = target.named.size(); d < out.candidates.size(); ++d)
        if (totals[d] >= out.lambda)
            throw Error("internal: adjustment profile lifted a dummy to lambda");
    return out;
}

std::optional<ShapeAnchor> find_shape(const ScoringVector& v, ShapeKind which, int l) {
    v.validate();
    const int m = v.size();
    struct Run {
        int start, end;
        Score value;
    };
    std::vector<Run> runs;
    for (int p = 1; p <= m; ++p) {
        const Score val = v.at_bottom_up(p);
        if (!runs.empty() && runs.back().value == val)
            runs.back().end = p;
        else
            runs.push_back({p, p, val});
    }

    if (which == ShapeKind::Lemma6) {
        for (size_t j = 0; j < runs.size(); ++j) {
            const Run& r = runs[j];
            if (r.value <= 0 || r.start < 2) continue;
            if (j == 0 || runs[j - 1].value != r.value - 1) continue;
            if (j + 1 >= runs.size() || runs[j + 1].value != r.value + 1) continue;
            return ShapeAnchor{r.start, r.end - r.start + 1};
        }
        return std::nullopt;
    }

    if (l < 1) throw ValidationError("lemma7 shape search requires l >= 1");
    for (size_t j = 0; j + 2 < runs.size(); ++j) {
        const Run& r = runs[j];
        if (r.end - r.start + 1 < l) continue;
        // Anchor the window at the top of this run so the next value sits
        // directly above it; runs above are strictly increasing already.
        return ShapeAnchor{r.end - l + 1, runs[j + 1].end - runs[j + 1].start + 1};
    }
    return std::nullopt;
}

namespace {

struct NamePool {
    std::vector<std::string> candidates;
    std::set<std::string> seen;

    int add(const std::string& name) {
        if (!seen.insert(name).second)
            throw ValidationError("candidate name collision in reduction: " + name);
        candidates.push_back(name);
        return static_cast<int>(candidates.size()) - 1;
    }
};

std::vector<int> indices_sorted_by_name(const std::vector<int>& ids,
                                        const std::vector<std::string>& names) {
    std::vector<int> out = ids;
    std::sort(out.begin(), out.end(), [&](int a, int b) {
        return names[static_cast<size_t>(a)] < names[static_cast<size_t>(b)];
    });
    return out;
}

void validate_lemma6_shape(const ScoringVector& v, int i, int k) {
    const int m = v.size();
    if (i < 2 || k < 1) throw ShapeError("lemma6 requires i >= 2 and k >= 1");
    if (i + k > m) throw ShapeError("lemma6 anchor does not fit the vector");
    const Score a = v.at_bottom_up(i);
    if (a <= 0) throw ShapeError("lemma6 run value must be positive");
    for (int p = i; p < i + k; ++p)
        if (v.at_bottom_up(p) != a) throw ShapeError("lemma6 run is not flat at the anchor");
    if (v.at_bottom_up(i - 1) != a - 1)
        throw ShapeError("lemma6 requires value a-1 directly below the run");
    if (v.at_bottom_up(i + k) != a + 1)
        throw ShapeError("lemma6 requires value a+1 directly above the run");
}

void validate_lemma7_shape(const ScoringVector& v, int i, int l, int k) {
    const int m = v.size();
    if (i < 1 || k < 1 || l < 1) throw ShapeError("lemma7 requires i >= 1, k >= 1, l >= 1");
    if (i + l + k > m) throw ShapeError("lemma7 anchor does not fit the vector");
    const Score a = v.at_bottom_up(i);
    for (int p = i; p < i + l; ++p)
        if (v.at_bottom_up(p) != a) throw ShapeError("lemma7 lower run is not flat");
    const Score b = v.at_bottom_up(i + l);
    if (b <= a) throw ShapeError("lemma7 requires a strictly greater value above the lower run");
    for (int p = i + l; p < i + l + k; ++p)
        if (v.at_bottom_up(p) != b) throw ShapeError("lemma7 upper run is not flat");
    const Score top = v.at_bottom_up(i + l + k);
    if (top <= b)
        throw ShapeError("lemma7 requires a strictly greater value above the upper run");
    // Integer strictness already forces a spread of at least 2.
}

} // namespace

ReductionOutput reduce_lemma6(const ThreeDMInstance& input, int k, int i,
                              const RuleFamily& family) {
    input.validate();
    const int M = input.m_size();
    const int S = static_cast<int>(input.triples.size());
    if (S <= M)
        throw ValidationError("lemma6 reduction requires |S| > M; decide the 3DM instance directly");
    if (i < 2 || k < 1) throw ShapeError("lemma6 requires i >= 2 and k >= 1");

    const int named_no_dummy = 1 + 3 * M + S * (k - 1); // c, E, H
    const int m = std::max(named_no_dummy + 1, i + k + 1);
    const ScoringVector v = score_vector(family, m);
    validate_lemma6_shape(v, i, k);

    const int dummy_count = m - named_no_dummy;
    const int need_fill = i - 2;
    if (need_fill > dummy_count + (S - 1) * (k - 1))
        throw ShapeError("lemma6 bottom segments cannot be filled at this anchor");

    NamePool pool;
    const int c = pool.add("c");
    std::vector<int> xs, ys, zs;
    for (const auto& e : input.xs) xs.push_back(pool.add(e));
    for (const auto& e : input.ys) ys.push_back(pool.add(e));
    for (const auto& e : input.zs) zs.push_back(pool.add(e));
    std::vector<std::vector<int>> pads(static_cast<size_t>(S));
    for (int t = 0; t < S; ++t)
        for (int j = 1; j < k; ++j)
            pads[static_cast<size_t>(t)].push_back(
                pool.add("h" + std::to_string(t + 1) + "_" + std::to_string(j)));
    std::vector<int> dummies;
    for (int j = 1; j <= dummy_count; ++j) dummies.push_back(pool.add("d" + std::to_string(j)));
    const std::vector<std::string>& names = pool.candidates;

    ReductionOutput out;
    ReductionLayout& layout = out.layout;
    layout.kind = ShapeKind::Lemma6;
    layout.m = m;
    layout.anchor_i = i;
    layout.run_k = k;
    layout.run_l = 0;
    layout.three_dm = input;
    layout.distinguished = "c";
    for (const auto& hs : pads) {
        std::vector<std::string> hs_names;
        for (int h : hs) {
            hs_names.push_back(names[static_cast<size_t>(h)]);
            layout.pad_candidates.push_back(names[static_cast<size_t>(h)]);
        }
        layout.per_triple_pads.push_back(std::move(hs_names));
    }
    for (int d : dummies) layout.dummies.push_back(names[static_cast<size_t>(d)]);

    // Partitioned votes and their canonical completions.
    Profile partial;
    LinearProfile canonical;
    for (int t = 0; t < S; ++t) {
        const auto& triple = input.triples[static_cast<size_t>(t)];
        const int x = xs[static_cast<size_t>(triple[0])];
        const int y = ys[static_cast<size_t>(triple[1])];
        const int z = zs[static_cast<size_t>(triple[2])];

        std::vector<int> free = {x, y, z};
        free.insert(free.end(), pads[static_cast<size_t>(t)].begin(),
                    pads[static_cast<size_t>(t)].end());

        std::vector<int> fill_pool = dummies;
        for (int t2 = 0; t2 < S; ++t2)
            if (t2 != t)
                fill_pool.insert(fill_pool.end(), pads[static_cast<size_t>(t2)].begin(),
                                 pads[static_cast<size_t>(t2)].end());
        std::vector<int> sorted_pool = indices_sorted_by_name(fill_pool, names);
        // Dummies first, then other triples' pads, each group by name.
        std::vector<int> dummy_part, pad_part;
        for (int a : sorted_pool)
            (std::find(dummies.begin(), dummies.end(), a) != dummies.end() ? dummy_part : pad_part)
                .push_back(a);
        std::vector<int> bottom;
        for (int a : dummy_part)
            if (static_cast<int>(bottom.size()) < need_fill) bottom.push_back(a);
        for (int a : pad_part)
            if (static_cast<int>(bottom.size()) < need_fill) bottom.push_back(a);

        std::vector<int> top;
        for (int a = 0; a < static_cast<int>(names.size()); ++a) {
            if (a == c) continue;
            if (std::find(free.begin(), free.end(), a) != free.end()) continue;
            if (std::find(bottom.begin(), bottom.end(), a) != bottom.end()) continue;
            top.push_back(a);
        }
        top = indices_sorted_by_name(top, names);

        PartitionedVote vote;
        vote.blocks.push_back({c}); // the distinguished candidate leads every vote
        for (int a : top) vote.blocks.push_back({a});
        std::vector<int> free_sorted = free;
        std::sort(free_sorted.begin(), free_sorted.end());
        vote.blocks.push_back(free_sorted);
        for (int a : indices_sorted_by_name(bottom, names)) vote.blocks.push_back({a});
        partial.votes.push_back(vote);

        LinearOrder canon;
        canon.push_back(c);
        canon.insert(canon.end(), top.begin(), top.end());
        canon.push_back(x);
        canon.push_back(y);
        for (int h : indices_sorted_by_name(pads[static_cast<size_t>(t)], names))
            canon.push_back(h);
        canon.push_back(z);
        for (int a : indices_sorted_by_name(bottom, names)) canon.push_back(a);
        canonical.push_back(std::move(canon));

        std::vector<std::string> fill_names;
        for (int a : bottom) fill_names.push_back(names[static_cast<size_t>(a)]);
        layout.bottom_fill.push_back(std::move(fill_names));
    }

    // Score targets relative to c over the canonical completion.
    const std::vector<Score> p_scores =
        score_linear_profile(canonical, static_cast<int>(names.size()), v);
    AdjustmentTarget target;
    std::vector<int> named_ids = {c};
    named_ids.insert(named_ids.end(), xs.begin(), xs.end());
    named_ids.insert(named_ids.end(), ys.begin(), ys.end());
    named_ids.insert(named_ids.end(), zs.begin(), zs.end());
    for (const auto& hs : pads) named_ids.insert(named_ids.end(), hs.begin(), hs.end());
    auto relative_target = [&](int a) -> Score {
        if (std::find(xs.begin(), xs.end(), a) != xs.end()) return 2;
        if (std::find(ys.begin(), ys.end(), a) != ys.end()) return -1;
        if (std::find(zs.begin(), zs.end(), a) != zs.end()) return -1;
        return 0; // c and the pads
    };
    for (int a : named_ids) {
        target.named.push_back(names[static_cast<size_t>(a)]);
        const Score t = a == c ? 0
                               : relative_target(a) + p_scores[static_cast<size_t>(c)] -
                                     p_scores[static_cast<size_t>(a)];
        target.offsets.push_back(t);
        layout.q_offsets[names[static_cast<size_t>(a)]] = t;
    }
    for (int d : dummies) target.dummies.push_back(names[static_cast<size_t>(d)]);

    const AdjustmentProfile q = build_adjustment_profile(target, v);
    layout.lambda = q.lambda;
    layout.adjustment_vote_count = static_cast<int>(q.votes.size());

    // Q's candidate order matches the instance order by construction.
    ElectionInstance& instance = out.instance;
    instance.candidates = names;
    instance.profile = partial;
    for (const auto& vote : q.votes) {
        PartitionedVote pv;
        for (int a : vote) pv.blocks.push_back({a});
        instance.profile.votes.push_back(std::move(pv));
    }
    instance.rule = Rule::of(v);
    instance.distinguished = c;
    instance.mode = WinnerMode::CoWinner;
    validate_instance(instance);

    // The combined canonical profile must hit the five relative targets.
    LinearProfile combined = canonical;
    combined.insert(combined.end(), q.votes.begin(), q.votes.end());
    const std::vector<Score> totals =
        score_linear_profile(combined, static_cast<int>(names.size()), v);
    const Score base = totals[static_cast<size_t>(c)];
    for (int a : named_ids)
        if (a != c && totals[static_cast<size_t>(a)] != base + relative_target(a))
            throw Error("internal: lemma6 score target missed for " +
                        names[static_cast<size_t>(a)]);
    for (int d : dummies)
        if (totals[static_cast<size_t>(d)] >= base)
            throw Error("internal: lemma6 dummy reached the distinguished score");

    return out;
}

ReductionOutput reduce_lemma7(const ThreeDMInstance& input, int i, int k,
                              const RuleFamily& family) {
    input.validate();
    const int M = input.m_size();
    const int S = static_cast<int>(input.triples.size());
    const int l = 3 * M - 2;
    if (i < 1 || k < 1) throw ShapeError("lemma7 requires i >= 1 and k >= 1");

    const int dummy_count = std::max(1, i - 1);
    const int m = 3 * M + k + dummy_count;
    const ScoringVector v = score_vector(family, m);
    validate_lemma7_shape(v, i, l, k);
    if (dummy_count < i - 1) throw ShapeError("lemma7 bottom segments cannot be filled");

    NamePool pool;
    const int c = pool.add("c");
    std::vector<int> xs, ys, zs;
    for (const auto& e : input.xs) xs.push_back(pool.add(e));
    for (const auto& e : input.ys) ys.push_back(pool.add(e));
    for (const auto& e : input.zs) zs.push_back(pool.add(e));
    std::vector<int> pads;
    for (int j = 1; j < k; ++j) pads.push_back(pool.add("h" + std::to_string(j)));
    std::vector<int> dummies;
    for (int j = 1; j <= dummy_count; ++j) dummies.push_back(pool.add("d" + std::to_string(j)));
    const std::vector<std::string>& names = pool.candidates;

    // Same bottom fill for every vote: |C_s| = i-1 dummies by name.
    const std::vector<int> dummies_by_name = indices_sorted_by_name(dummies, names);
    const std::vector<int> bottom(dummies_by_name.begin(), dummies_by_name.begin() + (i - 1));
    std::vector<int> top_rest;
    for (int d : dummies_by_name)
        if (std::find(bottom.begin(), bottom.end(), d) == bottom.end()) top_rest.push_back(d);

    ReductionOutput out;
    ReductionLayout& layout = out.layout;
    layout.kind = ShapeKind::Lemma7;
    layout.m = m;
    layout.anchor_i = i;
    layout.run_k = k;
    layout.run_l = l;
    layout.three_dm = input;
    layout.distinguished = "c";
    for (int h : pads) layout.pad_candidates.push_back(names[static_cast<size_t>(h)]);
    for (int d : dummies) layout.dummies.push_back(names[static_cast<size_t>(d)]);

    Profile partial;
    std::vector<int> all_e;
    all_e.insert(all_e.end(), xs.begin(), xs.end());
    all_e.insert(all_e.end(), ys.begin(), ys.end());
    all_e.insert(all_e.end(), zs.begin(), zs.end());
    for (int t = 0; t < S; ++t) {
        const auto& triple = input.triples[static_cast<size_t>(t)];
        const int x = xs[static_cast<size_t>(triple[0])];
        const int y = ys[static_cast<size_t>(triple[1])];
        const int z = zs[static_cast<size_t>(triple[2])];

        std::vector<int> free_top = {x, y, z};
        free_top.insert(free_top.end(), pads.begin(), pads.end());
        std::sort(free_top.begin(), free_top.end());

        std::vector<int> free_rest;
        for (int e : all_e)
            if (e != x && e != y && e != z) free_rest.push_back(e);
        std::sort(free_rest.begin(), free_rest.end());

        PartitionedVote vote;
        vote.blocks.push_back({c});
        for (int d : indices_sorted_by_name(top_rest, names)) vote.blocks.push_back({d});
        vote.blocks.push_back(free_top);
        if (!free_rest.empty()) vote.blocks.push_back(free_rest);
        for (int d : bottom) vote.blocks.push_back({d});
        partial.votes.push_back(std::move(vote));

        std::vector<std::string> fill_names;
        for (int d : bottom) fill_names.push_back(names[static_cast<size_t>(d)]);
        layout.bottom_fill.push_back(std::move(fill_names));
    }

    // Allowed maxima over the partitioned votes, per the occurrence counts.
    const Score run_low = v.at_bottom_up(i);
    const Score run_high = v.at_bottom_up(i + l);
    const Score peak = v.at_bottom_up(i + l + k);
    std::vector<int> occurrences(names.size(), 0);
    for (const auto& triple : input.triples) {
        occurrences[static_cast<size_t>(xs[static_cast<size_t>(triple[0])])]++;
        occurrences[static_cast<size_t>(ys[static_cast<size_t>(triple[1])])]++;
        occurrences[static_cast<size_t>(zs[static_cast<size_t>(triple[2])])]++;
    }
    auto allowance = [&](int a) -> Score {
        const Score n_e = occurrences[static_cast<size_t>(a)];
        if (std::find(xs.begin(), xs.end(), a) != xs.end())
            return (n_e - 1) * peak + (S - n_e + 1) * run_low;
        if (std::find(ys.begin(), ys.end(), a) != ys.end())
            return (n_e - 1) * run_high + peak + (S - n_e) * run_low;
        if (std::find(zs.begin(), zs.end(), a) != zs.end())
            return run_high + (S - 1) * run_low;
        return static_cast<Score>(S) * run_high; // pads
    };

    const Score c_partial = static_cast<Score>(S) * v.entries.front(); // c leads every vote
    AdjustmentTarget target;
    std::vector<int> named_ids = {c};
    named_ids.insert(named_ids.end(), all_e.begin(), all_e.end());
    named_ids.insert(named_ids.end(), pads.begin(), pads.end());
    for (int a : named_ids) {
        target.named.push_back(names[static_cast<size_t>(a)]);
        const Score x_w = a == c ? 0 : c_partial - allowance(a);
        target.offsets.push_back(x_w);
        layout.q_offsets[names[static_cast<size_t>(a)]] = x_w;
        if (a != c) layout.max_partial[names[static_cast<size_t>(a)]] = allowance(a);
    }
    for (int d : dummies) target.dummies.push_back(names[static_cast<size_t>(d)]);

    const AdjustmentProfile q = build_adjustment_profile(target, v);
    layout.lambda = q.lambda;
    layout.adjustment_vote_count = static_cast<int>(q.votes.size());

    ElectionInstance& instance = out.instance;
    instance.candidates = names;
    instance.profile = partial;
    for (const auto& vote : q.votes) {
        PartitionedVote pv;
        for (int a : vote) pv.blocks.push_back({a});
        instance.profile.votes.push_back(std::move(pv));
    }
    instance.rule = Rule::of(v);
    instance.distinguished = c;
    instance.mode = WinnerMode::CoWinner;
    validate_instance(instance);
    return out;
}

void check_tightness(const ReductionOutput& output) {
    const ReductionLayout& layout = output.layout;
    if (layout.kind != ShapeKind::Lemma7)
        throw ValidationError("tightness is defined for lemma7 layouts");
    const ScoringVector v = output.instance.scoring_vector();
    const int i = layout.anchor_i;
    const int l = layout.run_l;
    const int k = layout.run_k;
    const Score a = v.at_bottom_up(i);
    const Score b = v.at_bottom_up(i + l);
    const Score peak = v.at_bottom_up(i + l + k);
    const ThreeDMInstance& dm = layout.three_dm;
    const Score S = static_cast<Score>(dm.triples.size());
    const Score M = dm.m_size();
    const Score H = static_cast<Score>(layout.pad_candidates.size());

    auto lookup = [&](const std::string& name) -> Score {
        auto it = layout.max_partial.find(name);
        if (it == layout.max_partial.end())
            throw ValidationError("layout lacks a recorded allowance for " + name);
        return it->second;
    };
    auto sum_over = [&](const std::vector<std::string>& names) {
        Score s = 0;
        for (const auto& n : names) s += lookup(n);
        return s;
    };

    struct BlockSum {
        const char* label;
        Score actual;
        Score closed;
    };
    const BlockSum sums[] = {
        {"H", sum_over(layout.pad_candidates), H * S * b},
        {"X", sum_over(dm.xs), (S - M) * peak + M * a + a * S * (M - 1)},
        {"Y", sum_over(dm.ys), (S - M) * b + M * peak + a * S * (M - 1)},
        {"Z", sum_over(dm.zs), (S - M) * a + M * b + a * S * (M - 1)},
    };
    for (const auto& s : sums)
        if (s.actual != s.closed)
            throw ValidationError(std::string("tightness block sum ") + s.label + " is off: " +
                                  std::to_string(s.actual) + " vs " + std::to_string(s.closed));

    const Score position_total = S * (peak + (H + 1) * b + a + (3 * M - 3) * a);
    Score all = 0;
    for (const auto& s : sums) all += s.actual;
    if (all != position_total)
        throw ValidationError("tightness total is off: " + std::to_string(all) + " vs " +
                              std::to_string(position_total));
}

std::string serialize_layout(const ReductionLayout& layout) {
    json j;
    j["construction"] = layout.kind == ShapeKind::Lemma6 ? "lemma6" : "lemma7";
    j["m"] = layout.m;
    j["i"] = layout.anchor_i;
    j["k"] = layout.run_k;
    if (layout.kind == ShapeKind::Lemma7) j["l"] = layout.run_l;
    j["distinguished"] = layout.distinguished;
    j["dummies"] = layout.dummies;
    j["pads"] = layout.pad_candidates;
    if (layout.kind == ShapeKind::Lemma6) j["per_triple_pads"] = layout.per_triple_pads;
    j["bottom_fill"] = layout.bottom_fill;
    j["lambda"] = layout.lambda;
    j["adjustment_votes"] = layout.adjustment_vote_count;
    j["q_offsets"] = layout.q_offsets;
    if (!layout.max_partial.empty()) j["max_partial"] = layout.max_partial;
    return j.dump(2);
}

} // namespace pwin
