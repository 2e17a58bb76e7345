#pragma once

#include <algorithm>
#include <vector>

#include "pmw/decompose.hpp"

namespace pmw {

// Result of an induced algebraic matching: a partial pairing of source and
// target summands plus the coherent bases realizing it.
struct AlgebraicMatching {
    std::vector<std::pair<int, int>> pairs;  // (source summand, target summand)
    std::vector<int> unmatched_src, unmatched_tgt;
    CoherentBasis src_basis, tgt_basis;
    IntervalMorphism coeffs;  // in the final bases
};

namespace detail {

struct Block {
    std::vector<int> srcs, tgts;
};

// Groups summand ids by a shared end, ordering sources and targets the way
// the elimination consumes them.
inline std::vector<Block> end_blocks(const CoherentBasis& src, const CoherentBasis& tgt, bool right_end) {
    std::vector<std::pair<int, Block>> by_end;
    auto slot = [&](int key) -> Block& {
        for (auto& kv : by_end)
            if (kv.first == key) return kv.second;
        by_end.emplace_back(key, Block{});
        return by_end.back().second;
    };
    for (size_t s = 0; s < src.summands.size(); ++s) {
        const Interval& iv = src.summands[s].iv;
        slot(right_end ? iv.hi : iv.lo).srcs.push_back(static_cast<int>(s));
    }
    for (size_t t = 0; t < tgt.summands.size(); ++t) {
        const Interval& iv = tgt.summands[t].iv;
        slot(right_end ? iv.hi : iv.lo).tgts.push_back(static_cast<int>(t));
    }
    std::sort(by_end.begin(), by_end.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Block> blocks;
    for (auto& kv : by_end) {
        Block& b = kv.second;
        if (right_end) {
            // sources largest first (reverse inclusion), targets smallest first
            std::sort(b.srcs.begin(), b.srcs.end(), [&](int a, int c) {
                return std::pair(src.summands[a].iv.lo, a) < std::pair(src.summands[c].iv.lo, c);
            });
            std::sort(b.tgts.begin(), b.tgts.end(), [&](int a, int c) {
                return std::pair(-tgt.summands[a].iv.lo, a) < std::pair(-tgt.summands[c].iv.lo, c);
            });
        } else {
            // sources smallest first (inclusion), targets largest first
            std::sort(b.srcs.begin(), b.srcs.end(), [&](int a, int c) {
                return std::pair(src.summands[a].iv.hi, a) < std::pair(src.summands[c].iv.hi, c);
            });
            std::sort(b.tgts.begin(), b.tgts.end(), [&](int a, int c) {
                return std::pair(-tgt.summands[a].iv.hi, a) < std::pair(-tgt.summands[c].iv.hi, c);
            });
        }
        blocks.push_back(std::move(b));
    }
    return blocks;
}

}  // namespace detail

// Induced algebraic matching for a monomorphism between finite direct sums of
// interval modules on an ordered poset. Matched pairs share right ends,
// satisfy M_a inside N_a, and have a monomorphism on the diagonal.
inline AlgebraicMatching induced_matching_mono(const Morphism& f, CoherentBasis srcB, CoherentBasis tgtB) {
    if (!f.src->poset->ordered())
        throw ValidationError("induced matchings need an ordered poset");
    if (!is_mono(f)) throw ModeError("morphism is not a monomorphism");

    AlgebraicMatching out;
    std::vector<int> match_of_src(srcB.summands.size(), -1);
    std::vector<int> match_of_tgt(tgtB.summands.size(), -1);

    for (const auto& block : detail::end_blocks(srcB, tgtB, /*right_end=*/true)) {
        for (int s : block.srcs) {
            IntervalMorphism im = to_interval_coordinates(f, srcB, tgtB);
            int t1 = -1;
            for (int t : block.tgts)
                if (match_of_tgt[t] < 0 && !im.at(t, s).is_zero()) { t1 = t; break; }  // smallest
            if (t1 < 0)
                throw ValidationError("no unmatched target with a nonzero component; input is not mono");
            // clear the rest of this source's column inside the block
            for (int t : block.tgts) {
                if (t == t1) continue;
                im = to_interval_coordinates(f, srcB, tgtB);
                if (im.at(t, s).is_zero()) continue;
                tgtB = change_basis(tgtB, t, t1, im.at(t, s), im.at(t1, s));
            }
            // clear the rest of the matched target's row inside the block
            for (int s2 : block.srcs) {
                if (s2 == s) continue;
                im = to_interval_coordinates(f, srcB, tgtB);
                if (im.at(t1, s2).is_zero()) continue;
                srcB = change_basis(srcB, s, s2, -(im.at(t1, s2) / im.at(t1, s)), Fp(1));
            }
            match_of_src[s] = t1;
            match_of_tgt[t1] = s;
            out.pairs.emplace_back(s, t1);
        }
    }

    out.coeffs = to_interval_coordinates(f, srcB, tgtB);
    for (size_t s = 0; s < srcB.summands.size(); ++s)
        if (match_of_src[s] < 0) out.unmatched_src.push_back(static_cast<int>(s));
    for (size_t t = 0; t < tgtB.summands.size(); ++t)
        if (match_of_tgt[t] < 0) out.unmatched_tgt.push_back(static_cast<int>(t));
    if (!out.unmatched_src.empty())
        throw ValidationError("a source interval stayed unmatched; input is not mono");
    for (auto [s, t] : out.pairs) {
        const Interval& ms = srcB.summands[s].iv;
        const Interval& nt = tgtB.summands[t].iv;
        if (ms.hi != nt.hi || nt.lo > ms.lo || out.coeffs.at(t, s).is_zero())
            throw ValidationError("matched pair violates the mono matching contract");
    }
    out.src_basis = std::move(srcB);
    out.tgt_basis = std::move(tgtB);
    return out;
}

// Dual matching for an epimorphism: pairs share left ends, N_a inside M_a,
// epimorphisms on the diagonal.
inline AlgebraicMatching induced_matching_epi(const Morphism& f, CoherentBasis srcB, CoherentBasis tgtB) {
    if (!f.src->poset->ordered())
        throw ValidationError("induced matchings need an ordered poset");
    if (!is_epi(f)) throw ModeError("morphism is not an epimorphism");

    AlgebraicMatching out;
    std::vector<int> match_of_src(srcB.summands.size(), -1);
    std::vector<int> match_of_tgt(tgtB.summands.size(), -1);

    for (const auto& block : detail::end_blocks(srcB, tgtB, /*right_end=*/false)) {
        for (int t : block.tgts) {
            IntervalMorphism im = to_interval_coordinates(f, srcB, tgtB);
            int s1 = -1;
            for (int s : block.srcs)
                if (match_of_src[s] < 0 && !im.at(t, s).is_zero()) { s1 = s; break; }  // smallest
            if (s1 < 0)
                throw ValidationError("no unmatched source with a nonzero component; input is not epi");
            // clear the rest of this target's row inside the block
            for (int s2 : block.srcs) {
                if (s2 == s1) continue;
                im = to_interval_coordinates(f, srcB, tgtB);
                if (im.at(t, s2).is_zero()) continue;
                srcB = change_basis(srcB, s1, s2, -(im.at(t, s2) / im.at(t, s1)), Fp(1));
            }
            // clear the rest of the matched source's column inside the block
            for (int t2 : block.tgts) {
                if (t2 == t) continue;
                im = to_interval_coordinates(f, srcB, tgtB);
                if (im.at(t2, s1).is_zero()) continue;
                tgtB = change_basis(tgtB, t2, t, im.at(t2, s1), im.at(t, s1));
            }
            match_of_src[s1] = t;
            match_of_tgt[t] = s1;
            out.pairs.emplace_back(s1, t);
        }
    }

    out.coeffs = to_interval_coordinates(f, srcB, tgtB);
    for (size_t s = 0; s < srcB.summands.size(); ++s)
        if (match_of_src[s] < 0) out.unmatched_src.push_back(static_cast<int>(s));
    for (size_t t = 0; t < tgtB.summands.size(); ++t)
        if (match_of_tgt[t] < 0) out.unmatched_tgt.push_back(static_cast<int>(t));
    if (!out.unmatched_tgt.empty())
        throw ValidationError("a target interval stayed unmatched; input is not epi");
    for (auto [s, t] : out.pairs) {
        const Interval& ms = srcB.summands[s].iv;
        const Interval& nt = tgtB.summands[t].iv;
        if (ms.lo != nt.lo || nt.hi > ms.hi || out.coeffs.at(t, s).is_zero())
            throw ValidationError("matched pair violates the epi matching contract");
    }
    out.src_basis = std::move(srcB);
    out.tgt_basis = std::move(tgtB);
    return out;
}

// Coefficient-driven pairing without any change of basis. This is what the
// matching report falls back to on non-ordered quivers, where the matching
// theorems do not apply.
inline AlgebraicMatching coefficient_matching(const Morphism& f, CoherentBasis srcB,
                                              CoherentBasis tgtB, bool epi_mode) {
    AlgebraicMatching out;
    IntervalMorphism im = to_interval_coordinates(f, srcB, tgtB);
    std::vector<bool> used_src(srcB.summands.size(), false), used_tgt(tgtB.summands.size(), false);
    if (epi_mode) {
        for (size_t t = 0; t < tgtB.summands.size(); ++t)
            for (size_t s = 0; s < srcB.summands.size(); ++s)
                if (!used_src[s] && !im.at(static_cast<int>(t), static_cast<int>(s)).is_zero()) {
                    out.pairs.emplace_back(static_cast<int>(s), static_cast<int>(t));
                    used_src[s] = used_tgt[t] = true;
                    break;
                }
    } else {
        for (size_t s = 0; s < srcB.summands.size(); ++s)
            for (size_t t = 0; t < tgtB.summands.size(); ++t)
                if (!used_tgt[t] && !im.at(static_cast<int>(t), static_cast<int>(s)).is_zero()) {
                    out.pairs.emplace_back(static_cast<int>(s), static_cast<int>(t));
                    used_src[s] = used_tgt[t] = true;
                    break;
                }
    }
    for (size_t s = 0; s < srcB.summands.size(); ++s)
        if (!used_src[s]) out.unmatched_src.push_back(static_cast<int>(s));
    for (size_t t = 0; t < tgtB.summands.size(); ++t)
        if (!used_tgt[t]) out.unmatched_tgt.push_back(static_cast<int>(t));
    out.coeffs = std::move(im);
    out.src_basis = std::move(srcB);
    out.tgt_basis = std::move(tgtB);
    return out;
}

// Structure data for a nonzero map from or to an interval module: the nested
// chain of summands the map hits, the untouched rest, and the theorem's
// kernel/cokernel dimension functions.
struct NestedChain {
    std::vector<int> chain;     // summand ids, outermost first
    std::vector<int> residual;  // summands the transformed map misses
    CoherentBasis basis;        // transformed basis on the direct-sum side
    std::vector<int> ker_dims, coker_dims;
};

namespace detail {

inline bool leq_iv(const Interval& a, const Interval& b) { return a.lo <= b.lo && a.hi <= b.hi; }

// Rewrites the theorem's kernel/cokernel expression as a dimension function:
// residual + sum over the chain of M_j minus ((M_j \ M_{j+1}) meet I), the
// last chain entry contributing M_n minus (M_n meet I).
inline std::vector<int> chain_complement_dims(const CoherentBasis& basis, const std::vector<int>& chain,
                                              const std::vector<int>& residual, const Interval& ival) {
    const int np = basis.module->poset->point_count();
    std::vector<int> out(np, 0);
    for (int r : residual)
        for (int p = basis.summands[r].iv.lo; p <= basis.summands[r].iv.hi; ++p) out[p] += 1;
    for (size_t j = 0; j < chain.size(); ++j) {
        const Interval& mj = basis.summands[chain[j]].iv;
        for (int p = mj.lo; p <= mj.hi; ++p) {
            bool in_next = j + 1 < chain.size() && basis.summands[chain[j + 1]].iv.contains(p);
            bool removed = !in_next && ival.contains(p);
            if (!removed) out[p] += 1;
        }
    }
    return out;
}

}  // namespace detail

// Structure of a nonzero map f: I -> M with M a finite direct sum of
// intervals: after changes of basis f hits a strictly nested chain
// M_1 strictly containing M_2 ... , each M_j <= I, and misses the rest.
// ker f = I minus M_1.
inline NestedChain structure_from_interval(const Morphism& f, const Interval& ival, CoherentBasis tgtB) {
    if (!f.src->poset->ordered()) throw ValidationError("structure theorems need an ordered poset");
    ModuleWithBasis srcMB = module_from_barcode([&] {
        Barcode b(ival.poset);
        b.add(ival);
        return b;
    }());
    if (*f.src != *srcMB.module)
        throw ValidationError("source is not the given interval module");

    auto coeff_col = [&]() {
        IntervalMorphism im = to_interval_coordinates(f, srcMB.basis, tgtB);
        std::vector<Fp> col(tgtB.summands.size());
        for (size_t t = 0; t < col.size(); ++t) col[t] = im.at(static_cast<int>(t), 0);
        return col;
    };

    std::vector<Fp> col = coeff_col();
    bool any = false;
    for (const Fp& x : col) any = any || !x.is_zero();
    if (!any) throw ValidationError("structure theorem needs a nonzero map");

    // eliminate comparable pairs: the <=-smaller summand loses its component
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t a = 0; a < col.size() && !changed; ++a)
            for (size_t b = 0; b < col.size() && !changed; ++b) {
                if (a == b || col[a].is_zero() || col[b].is_zero()) continue;
                if (!detail::leq_iv(tgtB.summands[a].iv, tgtB.summands[b].iv)) continue;
                tgtB = change_basis(tgtB, static_cast<int>(a), static_cast<int>(b), col[a], col[b]);
                col = coeff_col();
                changed = true;
            }
    }

    NestedChain out;
    for (size_t t = 0; t < col.size(); ++t)
        (col[t].is_zero() ? out.residual : out.chain).push_back(static_cast<int>(t));
    std::sort(out.chain.begin(), out.chain.end(), [&](int a, int b) {
        return tgtB.summands[a].iv.lo < tgtB.summands[b].iv.lo;
    });
    for (size_t j = 0; j + 1 < out.chain.size(); ++j)
        if (!interval_strictly_inside(tgtB.summands[out.chain[j + 1]].iv, tgtB.summands[out.chain[j]].iv))
            throw ValidationError("chain is not strictly nested");
    for (int c : out.chain)
        if (!detail::leq_iv(tgtB.summands[c].iv, ival))
            throw ValidationError("chain summand is not below the interval");

    const int np = ival.poset->point_count();
    out.ker_dims.assign(np, 0);
    const Interval& m1 = tgtB.summands[out.chain.front()].iv;
    for (int p = ival.lo; p <= ival.hi; ++p)
        if (!m1.contains(p)) out.ker_dims[p] = 1;
    out.coker_dims = detail::chain_complement_dims(tgtB, out.chain, out.residual, ival);
    out.basis = std::move(tgtB);

    auto [ker, coker] = ker_coker_dims(f);
    if (ker != out.ker_dims || coker != out.coker_dims)
        throw ValidationError("structure theorem formulas disagree with pointwise ranks");
    return out;
}

// Dual: f: M -> I nonzero, M a finite direct sum of intervals. The chain
// satisfies I <= M_j and coker f = I minus M_1.
inline NestedChain structure_to_interval(const Morphism& f, const Interval& ival, CoherentBasis srcB) {
    if (!f.src->poset->ordered()) throw ValidationError("structure theorems need an ordered poset");
    ModuleWithBasis tgtMB = module_from_barcode([&] {
        Barcode b(ival.poset);
        b.add(ival);
        return b;
    }());
    if (*f.tgt != *tgtMB.module)
        throw ValidationError("target is not the given interval module");

    auto coeff_row = [&]() {
        IntervalMorphism im = to_interval_coordinates(f, srcB, tgtMB.basis);
        std::vector<Fp> row(srcB.summands.size());
        for (size_t s = 0; s < row.size(); ++s) row[s] = im.at(0, static_cast<int>(s));
        return row;
    };

    std::vector<Fp> row = coeff_row();
    bool any = false;
    for (const Fp& x : row) any = any || !x.is_zero();
    if (!any) throw ValidationError("structure theorem needs a nonzero map");

    // eliminate comparable pairs: the <=-larger summand loses its component
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t a = 0; a < row.size() && !changed; ++a)
            for (size_t b = 0; b < row.size() && !changed; ++b) {
                if (a == b || row[a].is_zero() || row[b].is_zero()) continue;
                if (!detail::leq_iv(srcB.summands[a].iv, srcB.summands[b].iv)) continue;
                srcB = change_basis(srcB, static_cast<int>(a), static_cast<int>(b),
                                    -(row[b] / row[a]), Fp(1));
                row = coeff_row();
                changed = true;
            }
    }

    NestedChain out;
    for (size_t s = 0; s < row.size(); ++s)
        (row[s].is_zero() ? out.residual : out.chain).push_back(static_cast<int>(s));
    std::sort(out.chain.begin(), out.chain.end(), [&](int a, int b) {
        return srcB.summands[a].iv.lo < srcB.summands[b].iv.lo;
    });
    for (size_t j = 0; j + 1 < out.chain.size(); ++j)
        if (!interval_strictly_inside(srcB.summands[out.chain[j + 1]].iv, srcB.summands[out.chain[j]].iv))
            throw ValidationError("chain is not strictly nested");
    for (int c : out.chain)
        if (!detail::leq_iv(ival, srcB.summands[c].iv))
            throw ValidationError("chain summand is not above the interval");

    const int np = ival.poset->point_count();
    out.coker_dims.assign(np, 0);
    const Interval& m1 = srcB.summands[out.chain.front()].iv;
    for (int p = ival.lo; p <= ival.hi; ++p)
        if (!m1.contains(p)) out.coker_dims[p] = 1;
    out.ker_dims = detail::chain_complement_dims(srcB, out.chain, out.residual, ival);
    out.basis = std::move(srcB);

    auto [ker, coker] = ker_coker_dims(f);
    if (ker != out.ker_dims || coker != out.coker_dims)
        throw ValidationError("structure theorem formulas disagree with pointwise ranks");
    return out;
}

}  // namespace pmw
