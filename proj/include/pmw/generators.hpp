#pragma once

#include <cstdint>
#include <vector>

#include "pmw/decompose.hpp"
#include "pmw/matrix.hpp"
#include "pmw/module.hpp"

namespace pmw {

// Deterministic splitmix64 stream; identical across platforms for a given
// seed, which keeps every randomized suite reproducible.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    bool flip() { return next() & 1; }
    Fp nonzero_scalar() { return Fp(1 + below(static_cast<int>(field_prime()) - 1)); }
    Fp scalar() { return Fp(below(static_cast<int>(field_prime()))); }

    Rng fork(std::uint64_t salt) { return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ull)); }
};

inline std::vector<Rat> integer_coords(int n) {
    std::vector<Rat> c;
    for (int i = 0; i < n; ++i) c.emplace_back(i);
    return c;
}

inline Mat random_matrix(Rng& rng, int rows, int cols) {
    Mat m(rows, cols);
    for (auto& x : m.a) x = rng.scalar();
    return m;
}

inline Interval random_interval(Rng& rng, const PosetPtr& poset) {
    int n = poset->point_count();
    int lo = rng.below(n);
    int hi = lo + rng.below(n - lo);
    return Interval(poset, lo, hi);
}

inline Barcode random_barcode(Rng& rng, const PosetPtr& poset, int max_intervals) {
    Barcode b(poset);
    int k = rng.below(max_intervals + 1);
    for (int i = 0; i < k; ++i) b.add(random_interval(rng, poset));
    b.normalize();
    return b;
}

inline std::vector<Orient> random_orients(Rng& rng, int points) {
    std::vector<Orient> o;
    for (int i = 0; i + 1 < points; ++i) o.push_back(rng.flip() ? Orient::Fwd : Orient::Bwd);
    return o;
}

// Raw module with random dimensions and arrow matrices; every matrix choice
// is a valid module on a linear poset.
inline ModulePtr random_raw_module(Rng& rng, const PosetPtr& poset, int max_dim) {
    std::vector<int> dims;
    for (int p = 0; p < poset->point_count(); ++p) dims.push_back(rng.below(max_dim + 1));
    std::vector<Mat> arrows;
    for (int k = 0; k < poset->arrow_count(); ++k) {
        Arrow a = poset->arrow(k);
        arrows.push_back(random_matrix(rng, dims[a.tgt], dims[a.src]));
    }
    return make_module(poset, std::move(dims), std::move(arrows));
}

// Natural morphism with random interval coordinates (zero allowed wherever a
// nonzero map exists).
inline Morphism random_natural_morphism(Rng& rng, const ModuleWithBasis& src,
                                        const ModuleWithBasis& tgt) {
    IntervalMorphism im;
    for (const auto& s : src.basis.summands) im.src_intervals.push_back(s.iv);
    for (const auto& t : tgt.basis.summands) im.tgt_intervals.push_back(t.iv);
    im.coeff = Mat(static_cast<int>(im.tgt_intervals.size()), static_cast<int>(im.src_intervals.size()));
    for (size_t t = 0; t < im.tgt_intervals.size(); ++t)
        for (size_t s = 0; s < im.src_intervals.size(); ++s)
            if (hom_dim(im.src_intervals[s], im.tgt_intervals[t]) == 1 && rng.flip())
                im.coeff.at(static_cast<int>(t), static_cast<int>(s)) = rng.scalar();
    return from_interval_coordinates(im, src.basis, tgt.basis);
}

struct MorphismInstance {
    Morphism f;
    ModuleWithBasis src, tgt;
};

// Random monomorphism: each source interval shares a right end with its own
// distinct target interval and sits inside it; extra components only hit
// undesignated targets, so the designated block stays injective pointwise.
inline MorphismInstance random_mono(Rng& rng, const PosetPtr& poset, int max_tgt_intervals) {
    Barcode tb(poset);
    int k = 1 + rng.below(max_tgt_intervals);
    for (int i = 0; i < k; ++i) tb.add(random_interval(rng, poset));
    tb.normalize();
    ModuleWithBasis tgt = module_from_barcode(tb);

    const int nt = static_cast<int>(tgt.basis.summands.size());
    Barcode sb(poset);
    for (int t = 0; t < nt; ++t) {
        if (rng.below(4) == 0) continue;  // some targets stay unmatched
        const Interval& iv = tgt.basis.summands[t].iv;
        int lo = iv.lo + rng.below(iv.length());
        sb.add(Interval(poset, lo, iv.hi));
    }
    ModuleWithBasis src = module_from_barcode(sb);

    // assign each source the smallest unused target with the same right end
    // containing it; sources are sorted by birth so the tightest go first
    std::vector<int> designated(src.basis.summands.size(), -1);
    std::vector<bool> used(nt, false);
    for (size_t s = 0; s < src.basis.summands.size(); ++s) {
        const Interval& ms = src.basis.summands[s].iv;
        int best = -1;
        for (int t = 0; t < nt; ++t) {
            if (used[t]) continue;
            const Interval& nt_iv = tgt.basis.summands[t].iv;
            if (nt_iv.hi != ms.hi || nt_iv.lo > ms.lo) continue;
            if (best < 0 || tgt.basis.summands[t].iv.lo > tgt.basis.summands[best].iv.lo) best = t;
        }
        if (best < 0) throw ValidationError("mono generator lost a designated target");
        designated[s] = best;
        used[best] = true;
    }

    IntervalMorphism im;
    for (const auto& s : src.basis.summands) im.src_intervals.push_back(s.iv);
    for (const auto& t : tgt.basis.summands) im.tgt_intervals.push_back(t.iv);
    im.coeff = Mat(nt, static_cast<int>(src.basis.summands.size()));
    for (size_t s = 0; s < src.basis.summands.size(); ++s) {
        im.coeff.at(designated[s], static_cast<int>(s)) = rng.nonzero_scalar();
        for (int t = 0; t < nt; ++t)
            if (!used[t] && hom_dim(im.src_intervals[s], im.tgt_intervals[t]) == 1 && rng.flip())
                im.coeff.at(t, static_cast<int>(s)) = rng.scalar();
    }
    Morphism f = from_interval_coordinates(im, src.basis, tgt.basis);
    if (!is_mono(f)) throw ValidationError("mono generator produced a non-mono");
    return {std::move(f), std::move(src), std::move(tgt)};
}

// Random epimorphism, mirrored: each target shares a left end with a distinct
// source containing it; extra components only come from undesignated sources.
inline MorphismInstance random_epi(Rng& rng, const PosetPtr& poset, int max_src_intervals) {
    Barcode sb(poset);
    int k = 1 + rng.below(max_src_intervals);
    for (int i = 0; i < k; ++i) sb.add(random_interval(rng, poset));
    sb.normalize();
    ModuleWithBasis src = module_from_barcode(sb);

    const int ns = static_cast<int>(src.basis.summands.size());
    Barcode tb(poset);
    for (int s = 0; s < ns; ++s) {
        if (rng.below(4) == 0) continue;
        const Interval& iv = src.basis.summands[s].iv;
        int hi = iv.lo + rng.below(iv.length());
        tb.add(Interval(poset, iv.lo, hi));
    }
    ModuleWithBasis tgt = module_from_barcode(tb);

    std::vector<int> designated(tgt.basis.summands.size(), -1);
    std::vector<bool> used(ns, false);
    for (size_t t = 0; t < tgt.basis.summands.size(); ++t) {
        const Interval& nt_iv = tgt.basis.summands[t].iv;
        int best = -1;
        for (int s = 0; s < ns; ++s) {
            if (used[s]) continue;
            const Interval& ms = src.basis.summands[s].iv;
            if (ms.lo != nt_iv.lo || ms.hi < nt_iv.hi) continue;
            if (best < 0 || src.basis.summands[s].iv.hi < src.basis.summands[best].iv.hi) best = s;
        }
        if (best < 0) throw ValidationError("epi generator lost a designated source");
        designated[t] = best;
        used[best] = true;
    }

    IntervalMorphism im;
    for (const auto& s : src.basis.summands) im.src_intervals.push_back(s.iv);
    for (const auto& t : tgt.basis.summands) im.tgt_intervals.push_back(t.iv);
    im.coeff = Mat(static_cast<int>(tgt.basis.summands.size()), ns);
    for (size_t t = 0; t < tgt.basis.summands.size(); ++t) {
        im.coeff.at(static_cast<int>(t), designated[t]) = rng.nonzero_scalar();
        for (int s = 0; s < ns; ++s)
            if (!used[s] && hom_dim(im.src_intervals[s], im.tgt_intervals[t]) == 1 && rng.flip())
                im.coeff.at(static_cast<int>(t), s) = rng.scalar();
    }
    Morphism f = from_interval_coordinates(im, src.basis, tgt.basis);
    if (!is_epi(f)) throw ValidationError("epi generator produced a non-epi");
    return {std::move(f), std::move(src), std::move(tgt)};
}

// Random zigzag with the two given decomposed modules as endpoints.
inline Zigzag random_zigzag_between(Rng& rng, const ModuleWithBasis& m, const ModuleWithBasis& n,
                                    int max_inner, int max_intervals) {
    const PosetPtr& poset = m.module->poset;
    std::vector<ModuleWithBasis> chain;
    chain.push_back(m);
    int inner = rng.below(max_inner + 1);
    for (int i = 0; i < inner; ++i)
        chain.push_back(module_from_barcode(random_barcode(rng, poset, max_intervals)));
    chain.push_back(n);

    std::vector<ModulePtr> nodes;
    for (const auto& c : chain) nodes.push_back(c.module);
    std::vector<Morphism> steps;
    std::vector<Zigzag::Dir> dirs;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        if (rng.flip()) {
            steps.push_back(random_natural_morphism(rng, chain[i], chain[i + 1]));
            dirs.push_back(Zigzag::Dir::Fwd);
        } else {
            steps.push_back(random_natural_morphism(rng, chain[i + 1], chain[i]));
            dirs.push_back(Zigzag::Dir::Bwd);
        }
    }
    return make_zigzag(std::move(nodes), std::move(steps), std::move(dirs));
}

}  // namespace pmw
