#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pmw/module.hpp"

namespace pmw {

// Is there a nonzero natural map I -> J? The intervals must intersect and at
// each boundary of the overlap the adjacent edge orientation must let the
// identity-on-overlap assignment extend by zero.
inline int hom_dim(const Interval& i, const Interval& j) {
    require_same_poset(i.poset, j.poset, "hom_dim");
    const Poset& P = *i.poset;
    int olo = std::max(i.lo, j.lo), ohi = std::min(i.hi, j.hi);
    if (olo > ohi) return 0;
    if (olo > 0) {
        bool i_ext = i.lo < olo, j_ext = j.lo < olo;
        if (i_ext && P.orients[olo - 1] == Orient::Fwd) return 0;
        if (j_ext && P.orients[olo - 1] == Orient::Bwd) return 0;
    }
    if (ohi < P.point_count() - 1) {
        bool i_ext = i.hi > ohi, j_ext = j.hi > ohi;
        if (i_ext && P.orients[ohi] == Orient::Bwd) return 0;
        if (j_ext && P.orients[ohi] == Orient::Fwd) return 0;
    }
    return 1;
}

// One interval copy of a coherent basis: a section of vectors over its
// support.
struct BasisSummand {
    Interval iv;
    std::vector<std::vector<Fp>> vecs;  // vecs[t] lives at point iv.lo + t

    const std::vector<Fp>& vec_at(int p) const { return vecs[p - iv.lo]; }
    std::vector<Fp>& vec_at(int p) { return vecs[p - iv.lo]; }
};

// Pointwise bases on which every structure map acts as an exact partial
// matching of basis vectors; the algebraic form of a barcode.
struct CoherentBasis {
    ModulePtr module;
    std::vector<BasisSummand> summands;

    std::vector<int> alive_at(int p) const {
        std::vector<int> out;
        for (size_t s = 0; s < summands.size(); ++s)
            if (summands[s].iv.contains(p)) out.push_back(static_cast<int>(s));
        return out;
    }

    // Columns are the alive summands' vectors in summand order.
    Mat basis_matrix(int p) const {
        std::vector<int> alive = alive_at(p);
        Mat b(module->dims[p], static_cast<int>(alive.size()));
        for (size_t c = 0; c < alive.size(); ++c) {
            const auto& v = summands[alive[c]].vec_at(p);
            for (int r = 0; r < b.rows; ++r) b.at(r, static_cast<int>(c)) = v[r];
        }
        return b;
    }

    Barcode barcode() const {
        Barcode b(module->poset);
        for (const auto& s : summands) b.add(s.iv);
        b.normalize();
        return b;
    }
};

inline void validate_coherent_basis(const CoherentBasis& cb) {
    const PersistenceModule& m = *cb.module;
    const Poset& P = *m.poset;
    for (int p = 0; p < P.point_count(); ++p) {
        Mat b = cb.basis_matrix(p);
        if (b.cols != m.dims[p] || rank(b) != m.dims[p])
            throw ValidationError("coherent basis is not a basis at point " + std::to_string(p));
    }
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        for (const auto& s : cb.summands) {
            if (!s.iv.contains(a.src)) continue;
            std::vector<Fp> img = mul_vec(m.arrows[k], s.vec_at(a.src));
            if (s.iv.contains(a.tgt)) {
                if (img != s.vec_at(a.tgt))
                    throw ValidationError("basis section is not carried to itself along arrow " +
                                          std::to_string(k));
            } else {
                for (const Fp& x : img)
                    if (!x.is_zero())
                        throw ValidationError("basis section does not vanish past its interval");
            }
        }
    }
}

struct ModuleWithBasis {
    ModulePtr module;
    CoherentBasis basis;
};

// Direct sum of interval modules in coherent-basis (unit vector) form.
inline ModuleWithBasis module_from_barcode(const Barcode& bc) {
    Barcode b = bc;
    b.normalize();
    if (!b.poset) throw ValidationError("barcode has no poset");
    const Poset& P = *b.poset;
    std::vector<Interval> ivs = b.expanded();

    const int np = P.point_count();
    std::vector<int> dims(np, 0);
    std::vector<std::vector<int>> idx(ivs.size());  // column index per point of support
    for (size_t s = 0; s < ivs.size(); ++s)
        for (int p = ivs[s].lo; p <= ivs[s].hi; ++p) idx[s].push_back(dims[p]++);

    std::vector<Mat> arrows;
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        Mat m(dims[a.tgt], dims[a.src]);
        for (size_t s = 0; s < ivs.size(); ++s)
            if (ivs[s].contains(a.src) && ivs[s].contains(a.tgt))
                m.at(idx[s][a.tgt - ivs[s].lo], idx[s][a.src - ivs[s].lo]) = Fp(1);
        arrows.push_back(std::move(m));
    }

    ModuleWithBasis out;
    out.module = make_module(b.poset, dims, std::move(arrows));
    out.basis.module = out.module;
    for (size_t s = 0; s < ivs.size(); ++s) {
        BasisSummand bs;
        bs.iv = ivs[s];
        for (int p = ivs[s].lo; p <= ivs[s].hi; ++p) {
            std::vector<Fp> v(dims[p]);
            v[idx[s][p - ivs[s].lo]] = Fp(1);
            bs.vecs.push_back(std::move(v));
        }
        out.basis.summands.push_back(std::move(bs));
    }
    return out;
}

namespace detail {

// A not-yet-closed interval during the sweep.
struct SweepLive {
    int birth;
    std::vector<std::vector<Fp>> vecs;  // one per point since birth
};

inline Mat columns(const std::vector<std::vector<Fp>>& cols, int nrows) {
    Mat m(nrows, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
        for (int r = 0; r < nrows; ++r) m.at(r, static_cast<int>(c)) = cols[c][r];
    return m;
}

}  // namespace detail

// Left-to-right coherent-basis reduction for fully forward-oriented posets:
// an image that falls in the span of older survivors closes the younger
// interval, after subtracting the witnessing combination from its whole
// section.
inline ModuleWithBasis decompose_by_reduction(const ModulePtr& mod) {
    if (!mod->poset->is_linear()) throw ValidationError("decomposition needs a linear poset");
    if (!mod->poset->ordered())
        throw ValidationError("reduction-based decomposition needs a fully forward poset");
    const PersistenceModule& m = *mod;
    const Poset& P = *m.poset;
    const int n = P.point_count();

    std::vector<detail::SweepLive> live;
    std::vector<BasisSummand> closed;

    auto close = [&](detail::SweepLive&& lv, int death) {
        BasisSummand bs;
        bs.iv = Interval(mod->poset, lv.birth, death);
        bs.vecs = std::move(lv.vecs);
        closed.push_back(std::move(bs));
    };

    // subtract c * (section of live[src]) from the section of live[dst]
    auto fold = [&](std::vector<detail::SweepLive>& ls, int dst, int src, Fp c, int upto) {
        const auto& other = ls[src];
        auto& mine = ls[dst];
        for (int t = mine.birth; t <= upto; ++t) {
            auto& tv = mine.vecs[t - mine.birth];
            const auto& ov = other.vecs[t - other.birth];
            for (size_t r = 0; r < tv.size(); ++r) tv[r] -= c * ov[r];
        }
    };

    // newborns at point 0
    for (int r = 0; r < m.dims[0]; ++r) {
        std::vector<Fp> v(m.dims[0]);
        v[r] = Fp(1);
        live.push_back({0, {std::move(v)}});
    }

    for (int e = 0; e < n - 1; ++e) {
        const Mat& A = m.arrows[e];
        const int k = e;
        const int nlive = static_cast<int>(live.size());
        std::vector<bool> dies(nlive, false);
        std::vector<std::vector<Fp>> next_vec(nlive);  // vector at k+1 for survivors

        std::vector<std::vector<Fp>> acc_imgs;  // images of survivors so far
        std::vector<int> acc_idx;
        for (int i = 0; i < nlive; ++i) {
            std::vector<Fp> w = mul_vec(A, live[i].vecs.back());
            auto c = solve(detail::columns(acc_imgs, m.dims[k + 1]), w);
            if (c) {
                // dies at k; fold the witnessing combination into the section
                for (size_t j = 0; j < acc_imgs.size(); ++j)
                    if (!(*c)[j].is_zero()) fold(live, i, acc_idx[j], (*c)[j], k);
                dies[i] = true;
            } else {
                acc_imgs.push_back(w);
                acc_idx.push_back(i);
                next_vec[i] = std::move(w);
            }
        }
        // newborns: extend surviving images to a basis of M(k+1)
        std::vector<std::vector<Fp>> span = acc_imgs;
        std::vector<std::vector<Fp>> born;
        for (int r = 0; r < m.dims[k + 1]; ++r) {
            std::vector<Fp> unit(m.dims[k + 1]);
            unit[r] = Fp(1);
            if (!solve(detail::columns(span, m.dims[k + 1]), unit)) {
                span.push_back(unit);
                born.push_back(std::move(unit));
            }
        }
        std::vector<detail::SweepLive> next_live;
        for (int i = 0; i < nlive; ++i) {
            if (dies[i]) {
                close(std::move(live[i]), k);
            } else {
                live[i].vecs.push_back(std::move(next_vec[i]));
                next_live.push_back(std::move(live[i]));
            }
        }
        for (auto& v : born) next_live.push_back({k + 1, {std::move(v)}});
        live = std::move(next_live);
    }
    for (auto& lv : live) close(std::move(lv), n - 1);

    std::sort(closed.begin(), closed.end(), [](const BasisSummand& a, const BasisSummand& b) {
        return std::pair(a.iv.lo, a.iv.hi) < std::pair(b.iv.lo, b.iv.hi);
    });
    ModuleWithBasis out;
    out.module = mod;
    out.basis.module = mod;
    out.basis.summands = std::move(closed);
    validate_coherent_basis(out.basis);
    return out;
}

// Generalized rank of the limit-to-colimit comparison over the segment
// [lo, hi]: solves the simultaneous-section system and quotients by the
// sum-of-images system.
inline int segment_rank(const PersistenceModule& m, int lo, int hi) {
    const Poset& P = *m.poset;
    std::vector<int> off(hi - lo + 2, 0);
    for (int p = lo; p <= hi; ++p) off[p - lo + 1] = off[p - lo] + m.dims[p];
    const int S = off[hi - lo + 1];

    int crows = 0, rcols = 0;
    for (int e = lo; e < hi; ++e) {
        Arrow a = P.arrow(e);
        crows += m.dims[a.tgt];
        rcols += m.dims[a.src];
    }
    Mat C(crows, S), R(S, rcols);
    int cr = 0, rc = 0;
    for (int e = lo; e < hi; ++e) {
        Arrow a = P.arrow(e);
        const Mat& A = m.arrows[e];
        for (int i = 0; i < A.rows; ++i) {
            for (int j = 0; j < A.cols; ++j) C.at(cr + i, off[a.src - lo] + j) = A.at(i, j);
            C.at(cr + i, off[a.tgt - lo] + i) -= Fp(1);
        }
        for (int j = 0; j < A.cols; ++j) {
            for (int i = 0; i < A.rows; ++i) R.at(off[a.tgt - lo] + i, rc + j) = A.at(i, j);
            R.at(off[a.src - lo] + j, rc + j) -= Fp(1);
        }
        cr += A.rows;
        rc += A.cols;
    }
    Mat K = kernel_basis(C);
    // project compatible families to their value at the first point
    Mat PK(S, K.cols);
    for (int i = 0; i < m.dims[lo]; ++i)
        for (int j = 0; j < K.cols; ++j) PK.at(i, j) = K.at(i, j);
    return rank(hcat(PK, R)) - rank(R);
}

// Orientation-agnostic interval multiplicities via inclusion-exclusion over
// generalized segment ranks. Serves as the independent oracle for the sweep.
inline Barcode decompose_by_segment_ranks(const ModulePtr& mod) {
    if (!mod->poset->is_linear()) throw ValidationError("decomposition needs a linear poset");
    const int n = mod->poset->point_count();
    std::vector<std::vector<int>> gr(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) gr[i][j] = segment_rank(*mod, i, j);
    auto G = [&](int i, int j) { return (i < 0 || j >= n || i > j) ? 0 : gr[i][j]; };
    Barcode bc(mod->poset);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            int mult = G(i, j) - G(i - 1, j) - G(i, j + 1) + G(i - 1, j + 1);
            if (mult < 0) throw ValidationError("negative interval multiplicity");
            if (mult > 0) bc.add(Interval(mod->poset, i, j), mult);
        }
    bc.normalize();
    return bc;
}

namespace detail {

// Realizes a known decomposition as a coherent basis: find an isomorphism
// from the canonical barcode module and push its unit sections forward.
inline CoherentBasis basis_via_isomorphism(const ModulePtr& mod, const Barcode& bc) {
    ModuleWithBasis canon = module_from_barcode(bc);
    if (canon.module->dims != mod->dims)
        throw ValidationError("barcode does not reproduce the dimension vector");
    std::optional<Morphism> phi = find_natural_isomorphism(canon.module, mod);
    if (!phi) throw ValidationError("failed to realize the decomposition as a coherent basis");

    CoherentBasis out;
    out.module = mod;
    for (const auto& s : canon.basis.summands) {
        BasisSummand bs;
        bs.iv = Interval(mod->poset, s.iv.lo, s.iv.hi);
        for (int p = s.iv.lo; p <= s.iv.hi; ++p)
            bs.vecs.push_back(mul_vec(phi->comps[p], s.vec_at(p)));
        out.summands.push_back(std::move(bs));
    }
    validate_coherent_basis(out);
    return out;
}

}  // namespace detail

// Coherent-basis decomposition on any orientation: the left-to-right
// reduction where all edges are forward, otherwise the segment-rank barcode
// realized through an isomorphism with its canonical module.
inline ModuleWithBasis decompose_with_basis(const ModulePtr& mod) {
    if (mod->poset->ordered()) return decompose_by_reduction(mod);
    ModuleWithBasis out;
    out.module = mod;
    out.basis = detail::basis_via_isomorphism(mod, decompose_by_segment_ranks(mod));
    return out;
}

inline Barcode decompose(const ModulePtr& mod) {
    if (mod->poset->ordered()) return decompose_by_reduction(mod).basis.barcode();
    return decompose_by_segment_ranks(mod);
}

// A morphism between interval-decomposed modules written as one scalar per
// (target interval, source interval) pair; nonzero only where hom_dim is 1,
// scaling the canonical identity-on-overlap map.
struct IntervalMorphism {
    std::vector<Interval> src_intervals, tgt_intervals;
    Mat coeff;  // rows: target summands, cols: source summands

    Fp at(int t, int s) const { return coeff.at(t, s); }
};

inline IntervalMorphism to_interval_coordinates(const Morphism& f, const CoherentBasis& src,
                                                const CoherentBasis& tgt) {
    if (*f.src != *src.module || *f.tgt != *tgt.module)
        throw ValidationError("bases do not belong to the morphism's modules");
    const Poset& P = *f.src->poset;
    const int np = P.point_count();

    // coordinates of f in the two bases, per point
    std::vector<Mat> L(np);
    for (int p = 0; p < np; ++p) {
        Mat t = tgt.basis_matrix(p);
        L[p] = f.tgt->dims[p] > 0 ? mul(invert(t), mul(f.comps[p], src.basis_matrix(p)))
                                  : Mat(0, src.basis_matrix(p).cols);
    }
    std::vector<std::vector<int>> scol(np), trow(np);
    for (int p = 0; p < np; ++p) {
        scol[p].assign(src.summands.size(), -1);
        trow[p].assign(tgt.summands.size(), -1);
        auto sa = src.alive_at(p);
        for (size_t c = 0; c < sa.size(); ++c) scol[p][sa[c]] = static_cast<int>(c);
        auto ta = tgt.alive_at(p);
        for (size_t r = 0; r < ta.size(); ++r) trow[p][ta[r]] = static_cast<int>(r);
    }

    IntervalMorphism im;
    for (const auto& s : src.summands) im.src_intervals.push_back(s.iv);
    for (const auto& t : tgt.summands) im.tgt_intervals.push_back(t.iv);
    im.coeff = Mat(static_cast<int>(tgt.summands.size()), static_cast<int>(src.summands.size()));

    for (size_t s = 0; s < src.summands.size(); ++s)
        for (size_t t = 0; t < tgt.summands.size(); ++t) {
            const Interval& is = src.summands[s].iv;
            const Interval& it = tgt.summands[t].iv;
            int olo = std::max(is.lo, it.lo), ohi = std::min(is.hi, it.hi);
            if (olo > ohi) continue;
            Fp val = L[olo].at(trow[olo][t], scol[olo][s]);
            for (int p = olo + 1; p <= ohi; ++p)
                if (L[p].at(trow[p][t], scol[p][s]) != val)
                    throw ValidationError("morphism is not constant on an interval overlap");
            if (!val.is_zero() && hom_dim(is, it) == 0)
                throw ValidationError("nonzero coefficient on a hom-less interval pair");
            im.coeff.at(static_cast<int>(t), static_cast<int>(s)) = val;
        }
    return im;
}

// Rebuilds the pointwise morphism from interval coordinates.
inline Morphism from_interval_coordinates(const IntervalMorphism& im, const CoherentBasis& src,
                                          const CoherentBasis& tgt) {
    const Poset& P = *src.module->poset;
    std::vector<Mat> comps;
    for (int p = 0; p < P.point_count(); ++p) {
        auto sa = src.alive_at(p);
        auto ta = tgt.alive_at(p);
        Mat lambda(static_cast<int>(ta.size()), static_cast<int>(sa.size()));
        for (size_t c = 0; c < sa.size(); ++c)
            for (size_t r = 0; r < ta.size(); ++r) lambda.at(static_cast<int>(r), static_cast<int>(c)) = im.coeff.at(ta[r], sa[c]);
        Mat t = tgt.basis_matrix(p);
        Mat s = src.basis_matrix(p);
        Mat fp = src.module->dims[p] > 0 && tgt.module->dims[p] > 0
                     ? mul(t, mul(lambda, invert(s)))
                     : Mat(tgt.module->dims[p], src.module->dims[p]);
        comps.push_back(std::move(fp));
    }
    return make_morphism(src.module, tgt.module, std::move(comps));
}

// Change of basis: with I <= J overlapping, the J summand's section becomes
// k*(I section) + l*(J section) on the overlap and l*(J section) past it.
// l = 0 is the identity change. The module itself is untouched.
inline CoherentBasis change_basis(const CoherentBasis& cb, int i, int j, Fp k, Fp l) {
    if (i == j) throw ValidationError("change_basis needs two distinct summands");
    const Interval& I = cb.summands[i].iv;
    const Interval& J = cb.summands[j].iv;
    if (!cb.module->poset->ordered()) throw ValidationError("change_basis needs an ordered poset");
    if (!(I.lo <= J.lo && I.hi <= J.hi)) throw ValidationError("change_basis needs I <= J");
    if (!intervals_intersect(I, J)) throw ValidationError("change_basis needs overlapping intervals");
    if (l.is_zero()) return cb;

    CoherentBasis out = cb;
    BasisSummand& sj = out.summands[j];
    for (int p = J.lo; p <= J.hi; ++p) {
        auto& v = sj.vec_at(p);
        for (auto& x : v) x *= l;
        if (I.contains(p)) {
            const auto& e = cb.summands[i].vec_at(p);
            for (size_t r = 0; r < v.size(); ++r) v[r] += k * e[r];
        }
    }
    return out;
}

}  // namespace pmw
