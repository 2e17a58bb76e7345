#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pmw/assignment.hpp"
#include "pmw/decompose.hpp"
#include "pmw/module.hpp"

namespace pmw {

// Finite p >= 1 or the max norm.
struct PNorm {
    bool is_inf = false;
    unsigned p = 1;

    static PNorm finite(unsigned p) {
        if (p == 0) throw ValidationError("p must be at least 1");
        return PNorm{false, p};
    }
    static PNorm inf() { return PNorm{true, 0}; }
};

// Extended coordinate for diagram points; infinities are representable but
// rejected by the distance computations.
struct ExtRat {
    enum class Kind { NegInf, Finite, PosInf } kind = Kind::Finite;
    Rat v = Rat(0);

    static ExtRat finite(Rat q) { return ExtRat{Kind::Finite, std::move(q)}; }
    static ExtRat pos_inf() { return ExtRat{Kind::PosInf, Rat(0)}; }
    static ExtRat neg_inf() { return ExtRat{Kind::NegInf, Rat(0)}; }
    bool finite_kind() const { return kind == Kind::Finite; }
};

struct DiagramPoint {
    ExtRat birth, death;

    static DiagramPoint at(Rat b, Rat d) {
        if (d < b) throw ValidationError("diagram point needs birth <= death");
        return DiagramPoint{ExtRat::finite(std::move(b)), ExtRat::finite(std::move(d))};
    }
    bool finite() const { return birth.finite_kind() && death.finite_kind(); }
};

// Ground metric on the extended plane: the 1-norm. Distance to the diagonal
// is death - birth.
inline Rat diagram_ground_distance(const DiagramPoint& x, const DiagramPoint& y) {
    if (!x.finite() || !y.finite())
        throw ValidationError("infinite coordinates are not supported in distance computations");
    return rat_abs(x.birth.v - y.birth.v) + rat_abs(x.death.v - y.death.v);
}

inline Rat diagram_diagonal_distance(const DiagramPoint& x) {
    if (!x.finite())
        throw ValidationError("infinite coordinates are not supported in distance computations");
    return x.death.v - x.birth.v;
}

// Endpoint pair of an interval under the half-open convention: birth is the
// left coordinate and death - birth equals the interval's measure.
inline DiagramPoint diagram_point(const Interval& iv, const Measure& mu) {
    Rat b = iv.poset->coords[iv.lo];
    Rat d = b + measure_of(iv, mu);
    return DiagramPoint::at(std::move(b), std::move(d));
}

// mu(I symmetric-difference J): the exact distance between interval modules.
inline Rat d_interval(const Interval& i, const Interval& j, const Measure& mu) {
    return symmetric_difference_measure(i, j, mu);
}

inline Rat d_interval_zero(const Interval& i, const Measure& mu) { return measure_of(i, mu); }

namespace detail {

// Canonical nonzero map between interval modules: identity on the overlap.
inline Morphism canonical_interval_morphism(const Interval& from, const Interval& to) {
    ModulePtr src = interval_module(from);
    ModulePtr tgt = interval_module(to);
    std::vector<Mat> comps;
    for (int p = 0; p < from.poset->point_count(); ++p) {
        Mat m(tgt->dims[p], src->dims[p]);
        if (from.contains(p) && to.contains(p)) m.at(0, 0) = Fp(1);
        comps.push_back(std::move(m));
    }
    return make_morphism(std::move(src), std::move(tgt), std::move(comps));
}

// One zigzag step between intervals differing at a single end, pointed the
// way the boundary edge orientation allows.
inline void push_end_step(Zigzag& z, const Interval& cur, const Interval& nxt) {
    if (hom_dim(cur, nxt) == 1) {
        z.steps.push_back(canonical_interval_morphism(cur, nxt));
        z.dirs.push_back(Zigzag::Dir::Fwd);
    } else {
        if (hom_dim(nxt, cur) != 1)
            throw ValidationError("no single-step morphism joins adjacent trim stages");
        z.steps.push_back(canonical_interval_morphism(nxt, cur));
        z.dirs.push_back(Zigzag::Dir::Bwd);
    }
    z.nodes.push_back(interval_module(nxt));
}

}  // namespace detail

// A zigzag between the two interval modules of cost exactly
// mu(I symmetric-difference J): trim I to the overlap, grow out to J, routing
// through zero when disjoint. Meets the Hilbert lower bound on every
// orientation.
inline Zigzag interval_witness_zigzag(const Interval& i, const Interval& j) {
    require_same_poset(i.poset, j.poset, "interval_witness_zigzag");
    if (!intervals_intersect(i, j)) return through_zero_zigzag(interval_module(i), interval_module(j));
    Zigzag z = trivial_zigzag(interval_module(i));
    Interval cur = i;
    const int olo = std::max(i.lo, j.lo), ohi = std::min(i.hi, j.hi);
    std::vector<Interval> stages;
    stages.emplace_back(i.poset, olo, cur.hi);     // trim left
    stages.emplace_back(i.poset, olo, ohi);        // trim right
    stages.emplace_back(i.poset, j.lo, ohi);       // grow left
    stages.emplace_back(i.poset, j.lo, j.hi);      // grow right
    for (const Interval& st : stages) {
        if (st.lo == cur.lo && st.hi == cur.hi) continue;
        detail::push_end_step(z, cur, st);
        cur = st;
    }
    return make_zigzag(z.nodes, z.steps, z.dirs);
}

inline Zigzag interval_to_zero_zigzag(const Interval& i) {
    ModulePtr m = interval_module(i);
    ModulePtr z = zero_module(i.poset);
    Zigzag out = trivial_zigzag(m);
    out.steps.push_back(zero_morphism(m, z));
    out.dirs.push_back(Zigzag::Dir::Fwd);
    out.nodes.push_back(z);
    return out;
}

// Optimal matching result; value_pow is the sum of p-th powers for finite p
// and the max cost for the bottleneck.
struct WassersteinResult {
    PNorm p;
    Rat value_pow = Rat(0);
    std::vector<std::pair<int, int>> matched;  // (index in A, index in B)
    std::vector<int> a_to_diag, b_to_diag;
    std::vector<Rat> pair_costs;               // ground cost per matched pair
    std::vector<Rat> a_diag_costs, b_diag_costs;

    double approx_value(double /*unused*/ = 0) const {
        return p.is_inf ? value_pow.get_d() : approx_root(value_pow, p.p);
    }
};

namespace detail {

// Diagonal-augmented assignment over explicit ground costs.
inline WassersteinResult solve_augmented(PNorm p, const std::vector<std::vector<Rat>>& ground,
                                         const std::vector<Rat>& a_diag, const std::vector<Rat>& b_diag) {
    const int m = static_cast<int>(a_diag.size());
    const int n = static_cast<int>(b_diag.size());
    const int N = m + n;
    WassersteinResult out;
    out.p = p;
    if (N == 0) return out;

    std::vector<int> row_to_col;
    if (p.is_inf) {
        std::vector<std::vector<std::optional<Rat>>> cost(N, std::vector<std::optional<Rat>>(N));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) cost[i][j] = ground[i][j];
        for (int i = 0; i < m; ++i) cost[i][n + i] = a_diag[i];
        for (int j = 0; j < n; ++j) cost[m + j][j] = b_diag[j];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) cost[m + i][n + j] = Rat(0);
        Assignment asg = bottleneck_assignment(cost);
        out.value_pow = asg.total;
        row_to_col = asg.row_to_col;
    } else {
        Rat big(1);
        for (const auto& row : ground)
            for (const Rat& c : row) big += rat_pow(c, p.p);
        for (const Rat& c : a_diag) big += rat_pow(c, p.p);
        for (const Rat& c : b_diag) big += rat_pow(c, p.p);
        std::vector<std::vector<Rat>> cost(N, std::vector<Rat>(N, big));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) cost[i][j] = rat_pow(ground[i][j], p.p);
        for (int i = 0; i < m; ++i) cost[i][n + i] = rat_pow(a_diag[i], p.p);
        for (int j = 0; j < n; ++j) cost[m + j][j] = rat_pow(b_diag[j], p.p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) cost[m + i][n + j] = Rat(0);
        Assignment asg = min_cost_assignment(cost);
        if (asg.total >= big) throw ValidationError("assignment failed to avoid forbidden cells");
        out.value_pow = asg.total;
        row_to_col = asg.row_to_col;
    }

    for (int i = 0; i < m; ++i) {
        int j = row_to_col[i];
        if (j < n) {
            out.matched.emplace_back(i, j);
            out.pair_costs.push_back(ground[i][j]);
        } else {
            out.a_to_diag.push_back(i);
            out.a_diag_costs.push_back(a_diag[i]);
        }
    }
    for (int r = m; r < N; ++r) {
        int j = row_to_col[r];
        if (j < n) {
            out.b_to_diag.push_back(j);
            out.b_diag_costs.push_back(b_diag[j]);
        }
    }
    if (p.is_inf) {
        // report the bottleneck value, re-derived from the chosen matching
        Rat mx(0);
        for (const Rat& c : out.pair_costs) mx = std::max(mx, c);
        for (const Rat& c : out.a_diag_costs) mx = std::max(mx, c);
        for (const Rat& c : out.b_diag_costs) mx = std::max(mx, c);
        out.value_pow = mx;
    }
    return out;
}

}  // namespace detail

// Exact p-Wasserstein distance between finite diagrams: optimal matching with
// unmatched points sent to the diagonal.
inline WassersteinResult wasserstein_diagrams(PNorm p, const std::vector<DiagramPoint>& a,
                                              const std::vector<DiagramPoint>& b) {
    std::vector<std::vector<Rat>> ground(a.size(), std::vector<Rat>(b.size(), Rat(0)));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) ground[i][j] = diagram_ground_distance(a[i], b[j]);
    std::vector<Rat> ad, bd;
    for (const auto& x : a) ad.push_back(diagram_diagonal_distance(x));
    for (const auto& y : b) bd.push_back(diagram_diagonal_distance(y));
    return detail::solve_augmented(p, ground, ad, bd);
}

struct ModuleWasserstein {
    WassersteinResult result;
    std::vector<Interval> a_intervals, b_intervals;  // expanded decompositions
};

// p-Wasserstein distance between interval-decomposable modules: decompose,
// price interval pairs at mu(I symmetric-difference J) and zero-matches at
// mu(I), then solve the same augmented assignment.
inline ModuleWasserstein wasserstein_modules(PNorm p, const ModulePtr& m, const ModulePtr& n,
                                             const Measure& mu) {
    if (!m->poset->is_linear())
        throw ModeError("module Wasserstein needs an interval-decomposable (linear) module");
    require_same_poset(m->poset, n->poset, "wasserstein_modules");
    require_same_poset(m->poset, mu.poset, "wasserstein_modules");
    ModuleWasserstein out;
    out.a_intervals = decompose(m).expanded();
    out.b_intervals = decompose(n).expanded();
    std::vector<std::vector<Rat>> ground(out.a_intervals.size(),
                                         std::vector<Rat>(out.b_intervals.size(), Rat(0)));
    for (size_t i = 0; i < out.a_intervals.size(); ++i)
        for (size_t j = 0; j < out.b_intervals.size(); ++j)
            ground[i][j] = d_interval(out.a_intervals[i], out.b_intervals[j], mu);
    std::vector<Rat> ad, bd;
    for (const auto& iv : out.a_intervals) ad.push_back(d_interval_zero(iv, mu));
    for (const auto& iv : out.b_intervals) bd.push_back(d_interval_zero(iv, mu));
    out.result = detail::solve_augmented(p, ground, ad, bd);
    return out;
}

namespace detail {

// Pads a per-pair zigzag into the fixed direction template so the summand
// zigzags can be direct-summed slot by slot.
inline Zigzag pad_to_template(const Zigzag& z, const std::vector<Zigzag::Dir>& tmpl) {
    Zigzag out = trivial_zigzag(z.nodes[0]);
    size_t next = 0;
    for (Zigzag::Dir want : tmpl) {
        ModulePtr cur = out.nodes.back();
        if (next < z.steps.size() && z.dirs[next] == want) {
            out.steps.push_back(z.steps[next]);
            out.nodes.push_back(z.nodes[next + 1]);
            ++next;
        } else {
            out.steps.push_back(identity_morphism(cur));
            out.nodes.push_back(cur);
        }
        out.dirs.push_back(want);
    }
    if (next != z.steps.size()) throw ValidationError("zigzag does not fit the direction template");
    return out;
}

inline Morphism morphism_direct_sum(const std::vector<Morphism>& fs, const ModulePtr& src,
                                    const ModulePtr& tgt) {
    const int np = src->poset->point_count();
    std::vector<Mat> comps;
    for (int p = 0; p < np; ++p) {
        Mat blk(tgt->dims[p], src->dims[p]);
        int ro = 0, co = 0;
        for (const Morphism& f : fs) {
            const Mat& sub = f.comps[p];
            for (int i = 0; i < sub.rows; ++i)
                for (int j = 0; j < sub.cols; ++j) blk.at(ro + i, co + j) = sub.at(i, j);
            ro += sub.rows;
            co += sub.cols;
        }
        comps.push_back(std::move(blk));
    }
    return make_morphism(src, tgt, std::move(comps));
}

}  // namespace detail

// Builds the witnessing zigzag of the W1-optimal matching: per-pair interval
// zigzags padded to a common shape and direct-summed, with zero-cost
// isomorphism steps tying the canonical decomposed forms to the given
// modules.
inline Zigzag matching_witness_zigzag(const ModulePtr& m, const ModulePtr& n,
                                      const ModuleWasserstein& w) {
    const std::vector<Zigzag::Dir> tmpl{Zigzag::Dir::Fwd, Zigzag::Dir::Bwd, Zigzag::Dir::Fwd,
                                        Zigzag::Dir::Bwd};

    // per-pair zigzags in a fixed order: matched pairs, then unmatched
    std::vector<Zigzag> parts;
    std::vector<int> a_summand, b_summand;  // which decomposition summand each part uses
    for (auto [i, j] : w.result.matched) {
        parts.push_back(detail::pad_to_template(
            interval_witness_zigzag(w.a_intervals[i], w.b_intervals[j]), tmpl));
        a_summand.push_back(i);
        b_summand.push_back(j);
    }
    for (int i : w.result.a_to_diag) {
        parts.push_back(detail::pad_to_template(interval_to_zero_zigzag(w.a_intervals[i]), tmpl));
        a_summand.push_back(i);
        b_summand.push_back(-1);
    }
    for (int j : w.result.b_to_diag) {
        Zigzag z = interval_to_zero_zigzag(w.b_intervals[j]);
        // reverse: 0 -> J
        Zigzag rz = trivial_zigzag(z.nodes.back());
        rz.steps.push_back(z.steps[0]);
        rz.dirs.push_back(Zigzag::Dir::Bwd);
        rz.nodes.push_back(z.nodes[0]);
        parts.push_back(detail::pad_to_template(rz, tmpl));
        a_summand.push_back(-1);
        b_summand.push_back(j);
    }

    // slot-wise direct sums
    std::vector<ModulePtr> nodes;
    std::vector<Morphism> steps;
    std::vector<Zigzag::Dir> dirs;
    const int slots = static_cast<int>(tmpl.size());
    for (int t = 0; t <= slots; ++t) {
        std::vector<ModulePtr> mods;
        for (const Zigzag& pz : parts) mods.push_back(pz.nodes[t]);
        nodes.push_back(parts.empty() ? zero_module(m->poset) : direct_sum(mods).total);
    }
    for (int t = 0; t < slots; ++t) {
        std::vector<Morphism> fs;
        for (const Zigzag& pz : parts) fs.push_back(pz.steps[t]);
        ModulePtr src = tmpl[t] == Zigzag::Dir::Fwd ? nodes[t] : nodes[t + 1];
        ModulePtr tgt = tmpl[t] == Zigzag::Dir::Fwd ? nodes[t + 1] : nodes[t];
        steps.push_back(parts.empty() ? zero_morphism(src, tgt)
                                      : detail::morphism_direct_sum(fs, src, tgt));
        dirs.push_back(tmpl[t]);
    }

    // isomorphisms from the given modules onto the decomposed endpoint forms
    auto iso_onto_parts = [&](const ModulePtr& mod, const std::vector<int>& part_summand,
                              bool use_a) -> Morphism {
        CoherentBasis cb = decompose_with_basis(mod).basis;
        const ModulePtr& tgt = use_a ? nodes.front() : nodes.back();
        std::vector<Mat> comps;
        for (int p = 0; p < mod->poset->point_count(); ++p) {
            Mat binv = mod->dims[p] > 0 ? invert(cb.basis_matrix(p)) : Mat(0, 0);
            std::vector<int> alive = cb.alive_at(p);
            Mat phi(tgt->dims[p], mod->dims[p]);
            int row = 0;
            for (size_t a = 0; a < parts.size(); ++a) {
                int s = part_summand[a];
                bool part_alive = s >= 0 && cb.summands[s].iv.contains(p);
                if (part_alive) {
                    int pos = -1;
                    for (size_t q = 0; q < alive.size(); ++q)
                        if (alive[q] == s) pos = static_cast<int>(q);
                    if (pos < 0) throw ValidationError("decomposition summand mismatch in witness");
                    for (int c = 0; c < mod->dims[p]; ++c) phi.at(row, c) = binv.at(pos, c);
                }
                row += parts[a].nodes[use_a ? 0 : slots]->dims[p];
            }
            comps.push_back(std::move(phi));
        }
        return make_morphism(mod, tgt, std::move(comps));
    };

    Zigzag out = trivial_zigzag(m);
    out.steps.push_back(iso_onto_parts(m, a_summand, true));
    out.dirs.push_back(Zigzag::Dir::Fwd);
    out.nodes.insert(out.nodes.end(), nodes.begin(), nodes.end());
    out.steps.insert(out.steps.end(), steps.begin(), steps.end());
    out.dirs.insert(out.dirs.end(), dirs.begin(), dirs.end());
    out.steps.push_back(iso_onto_parts(n, b_summand, false));
    out.dirs.push_back(Zigzag::Dir::Bwd);
    out.nodes.push_back(n);
    return make_zigzag(out.nodes, out.steps, out.dirs);
}

struct ExactDistance {
    Rat value;
    Zigzag witness;
};

// Exact zigzag distance for interval-decomposable modules on an ordered
// poset: the W1 value together with a witnessing zigzag achieving it.
inline ExactDistance d_mu_exact_decomposable(const ModulePtr& m, const ModulePtr& n, const Measure& mu) {
    if (!m->poset->is_linear() || !m->poset->ordered())
        throw ModeError("exact distance needs an ordered linear poset");
    ModuleWasserstein w = wasserstein_modules(PNorm::finite(1), m, n, mu);
    ExactDistance out{w.result.value_pow, matching_witness_zigzag(m, n, w)};
    return out;
}

struct Bracket {
    Rat lower, upper;
    bool exact = false;
    // what achieved the upper bound: -2 exact W1, -1 through-zero, else hint index
    int upper_witness = -1;
};

// Lower bound from Hilbert functions, upper bound from the through-zero
// zigzag, any user zigzags, and (on ordered linear posets) the exact W1
// value.
inline Bracket d_mu_bracket(const ModulePtr& m, const ModulePtr& n, const Measure& mu,
                            const std::vector<Zigzag>& hints = {}) {
    if (*m == *n) return Bracket{Rat(0), Rat(0), true, -2};  // length-0 zigzag
    auto [lo, hi] = hilbert_bounds(*m, *n, mu);
    int witness = -1;
    for (size_t k = 0; k < hints.size(); ++k) {
        const Zigzag& z = hints[k];
        bool forward = *z.front() == *m && *z.back() == *n;
        bool backward = *z.front() == *n && *z.back() == *m;
        if (!forward && !backward)
            throw ValidationError("hint zigzag does not join the two modules");
        Rat c = zigzag_cost(z, mu);
        if (c < hi) {
            hi = c;
            witness = static_cast<int>(k);
        }
    }
    if (m->poset->is_linear() && m->poset->ordered()) {
        Rat exact = wasserstein_modules(PNorm::finite(1), m, n, mu).result.value_pow;
        return Bracket{exact, exact, true, -2};
    }
    if (hi < lo) throw ValidationError("a hint zigzag beat the Hilbert lower bound");
    return Bracket{lo, hi, lo == hi, witness};
}

// Certified lower bound for W_p between modules declared as direct sums of
// the given indecomposables: optimal matching with Hilbert lower bounds as
// ground costs.
inline WassersteinResult wp_lower_bound_indecomposable(PNorm p, const std::vector<ModulePtr>& parts_m,
                                                       const std::vector<ModulePtr>& parts_n,
                                                       const Measure& mu) {
    for (const auto& mp : parts_m) require_same_poset(mp->poset, mu.poset, "wp_lower_bound");
    for (const auto& np : parts_n) require_same_poset(np->poset, mu.poset, "wp_lower_bound");
    std::vector<std::vector<Rat>> ground(parts_m.size(), std::vector<Rat>(parts_n.size(), Rat(0)));
    for (size_t i = 0; i < parts_m.size(); ++i)
        for (size_t j = 0; j < parts_n.size(); ++j)
            ground[i][j] = hilbert_bounds(*parts_m[i], *parts_n[j], mu).first;
    std::vector<Rat> ad, bd;
    for (const auto& mp : parts_m) ad.push_back(module_weight(*mp, mu));
    for (const auto& np : parts_n) bd.push_back(module_weight(*np, mu));
    return detail::solve_augmented(p, ground, ad, bd);
}

}  // namespace pmw
