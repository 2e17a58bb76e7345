#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "pmw/matrix.hpp"
#include "pmw/poset.hpp"

namespace pmw {

// Functor from the poset to finite-dimensional vector spaces: a dimension per
// point plus one matrix per generating arrow. Shapes and grid commutativity
// are checked at construction; treat instances as immutable afterwards.
struct PersistenceModule {
    PosetPtr poset;
    std::vector<int> dims;
    std::vector<Mat> arrows;  // indexed like poset->arrow(k), shape dims[tgt] x dims[src]

    int dim(int p) const { return dims[p]; }
    const Mat& arrow_map(int k) const { return arrows[k]; }

    bool is_zero() const {
        for (int d : dims)
            if (d != 0) return false;
        return true;
    }

    friend bool operator==(const PersistenceModule& a, const PersistenceModule& b) {
        return same_poset(a.poset, b.poset) && a.dims == b.dims && a.arrows == b.arrows;
    }
    friend bool operator!=(const PersistenceModule& a, const PersistenceModule& b) { return !(a == b); }
};

using ModulePtr = std::shared_ptr<const PersistenceModule>;

inline ModulePtr make_module(PosetPtr poset, std::vector<int> dims, std::vector<Mat> arrows) {
    auto m = std::make_shared<PersistenceModule>();
    m->poset = std::move(poset);
    m->dims = std::move(dims);
    m->arrows = std::move(arrows);
    const Poset& P = *m->poset;
    if (static_cast<int>(m->dims.size()) != P.point_count())
        throw ValidationError("module needs one dimension per poset point");
    for (int d : m->dims)
        if (d < 0) throw ValidationError("negative dimension");
    if (static_cast<int>(m->arrows.size()) != P.arrow_count())
        throw ValidationError("module needs one matrix per generating arrow");
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        if (m->arrows[k].rows != m->dims[a.tgt] || m->arrows[k].cols != m->dims[a.src])
            throw ValidationError("arrow matrix shape mismatch at arrow " + std::to_string(k));
    }
    if (P.is_grid()) {
        // every unit square must commute
        for (int iy = 0; iy + 1 < P.ny(); ++iy)
            for (int ix = 0; ix + 1 < P.nx(); ++ix) {
                const Mat& right_then_up = mul(m->arrows[P.up_arrow(ix + 1, iy)], m->arrows[P.right_arrow(ix, iy)]);
                const Mat& up_then_right = mul(m->arrows[P.right_arrow(ix, iy + 1)], m->arrows[P.up_arrow(ix, iy)]);
                if (right_then_up != up_then_right)
                    throw ValidationError("grid square does not commute at (" + std::to_string(ix) + "," +
                                          std::to_string(iy) + ")");
            }
    }
    return m;
}

inline ModulePtr zero_module(PosetPtr poset) {
    std::vector<int> dims(poset->point_count(), 0);
    std::vector<Mat> arrows(poset->arrow_count());
    return make_module(std::move(poset), std::move(dims), std::move(arrows));
}

// The interval module: the field on [lo,hi] with identity interior maps.
inline ModulePtr interval_module(const Interval& iv) {
    const Poset& P = *iv.poset;
    std::vector<int> dims(P.point_count(), 0);
    for (int p = iv.lo; p <= iv.hi; ++p) dims[p] = 1;
    std::vector<Mat> arrows;
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        Mat m(dims[a.tgt], dims[a.src]);
        if (dims[a.src] == 1 && dims[a.tgt] == 1) m.at(0, 0) = Fp(1);
        arrows.push_back(std::move(m));
    }
    return make_module(iv.poset, std::move(dims), std::move(arrows));
}

// Hilbert function: the pointwise dimension vector.
inline std::vector<int> hilbert(const PersistenceModule& m) { return m.dims; }

inline Rat integral(const std::vector<int>& f, const Measure& mu) {
    Rat s(0);
    for (size_t p = 0; p < f.size(); ++p) s += Rat(f[p]) * mu.w[p];
    return s;
}

inline Rat module_weight(const PersistenceModule& m, const Measure& mu) {
    require_same_poset(m.poset, mu.poset, "module_weight");
    return integral(m.dims, mu);
}

// Natural transformation between modules on the same poset.
struct Morphism {
    ModulePtr src, tgt;
    std::vector<Mat> comps;  // per point, shape tgt.dims[p] x src.dims[p]

    const Mat& at(int p) const { return comps[p]; }
};

inline Morphism make_morphism(ModulePtr src, ModulePtr tgt, std::vector<Mat> comps) {
    require_same_poset(src->poset, tgt->poset, "make_morphism");
    const Poset& P = *src->poset;
    if (static_cast<int>(comps.size()) != P.point_count())
        throw ValidationError("morphism needs one matrix per poset point");
    for (int p = 0; p < P.point_count(); ++p)
        if (comps[p].rows != tgt->dims[p] || comps[p].cols != src->dims[p])
            throw ValidationError("morphism component shape mismatch at point " + std::to_string(p));
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        if (mul(comps[a.tgt], src->arrows[k]) != mul(tgt->arrows[k], comps[a.src]))
            throw ValidationError("naturality fails at arrow " + std::to_string(k));
    }
    return Morphism{std::move(src), std::move(tgt), std::move(comps)};
}

inline Morphism identity_morphism(ModulePtr m) {
    std::vector<Mat> comps;
    for (int d : m->dims) comps.push_back(Mat::identity(d));
    return make_morphism(m, m, std::move(comps));
}

inline Morphism zero_morphism(ModulePtr src, ModulePtr tgt) {
    std::vector<Mat> comps;
    for (size_t p = 0; p < src->dims.size(); ++p) comps.push_back(Mat(tgt->dims[p], src->dims[p]));
    return make_morphism(std::move(src), std::move(tgt), std::move(comps));
}

// Pointwise kernel and cokernel dimension functions.
inline std::pair<std::vector<int>, std::vector<int>> ker_coker_dims(const Morphism& f) {
    std::vector<int> ker, coker;
    for (size_t p = 0; p < f.comps.size(); ++p) {
        int r = rank(f.comps[p]);
        ker.push_back(f.src->dims[p] - r);
        coker.push_back(f.tgt->dims[p] - r);
    }
    return {ker, coker};
}

inline bool is_mono(const Morphism& f) {
    for (size_t p = 0; p < f.comps.size(); ++p)
        if (rank(f.comps[p]) != f.src->dims[p]) return false;
    return true;
}

inline bool is_epi(const Morphism& f) {
    for (size_t p = 0; p < f.comps.size(); ++p)
        if (rank(f.comps[p]) != f.tgt->dims[p]) return false;
    return true;
}

// Alternating chain of morphisms; step i joins nodes[i] and nodes[i+1],
// pointing per dirs[i].
struct Zigzag {
    enum class Dir { Fwd, Bwd };  // Fwd: nodes[i] -> nodes[i+1]

    std::vector<ModulePtr> nodes;
    std::vector<Morphism> steps;
    std::vector<Dir> dirs;

    int length() const { return static_cast<int>(steps.size()); }
    ModulePtr front() const { return nodes.front(); }
    ModulePtr back() const { return nodes.back(); }
};

inline Zigzag make_zigzag(std::vector<ModulePtr> nodes, std::vector<Morphism> steps,
                          std::vector<Zigzag::Dir> dirs) {
    if (nodes.empty()) throw ValidationError("zigzag needs at least one module");
    if (steps.size() + 1 != nodes.size() || dirs.size() != steps.size())
        throw ValidationError("zigzag step count mismatch");
    for (size_t i = 0; i < steps.size(); ++i) {
        const ModulePtr& from = dirs[i] == Zigzag::Dir::Fwd ? nodes[i] : nodes[i + 1];
        const ModulePtr& to = dirs[i] == Zigzag::Dir::Fwd ? nodes[i + 1] : nodes[i];
        if (*steps[i].src != *from || *steps[i].tgt != *to)
            throw ValidationError("zigzag step " + std::to_string(i) + " does not join its nodes");
    }
    return Zigzag{std::move(nodes), std::move(steps), std::move(dirs)};
}

inline Zigzag trivial_zigzag(ModulePtr m) { return make_zigzag({std::move(m)}, {}, {}); }

// M -> 0 <- N
inline Zigzag through_zero_zigzag(ModulePtr m, ModulePtr n) {
    require_same_poset(m->poset, n->poset, "through_zero_zigzag");
    ModulePtr z = zero_module(m->poset);
    std::vector<Morphism> steps;
    steps.push_back(zero_morphism(m, z));
    steps.push_back(zero_morphism(n, z));
    return make_zigzag({m, z, n}, std::move(steps), {Zigzag::Dir::Fwd, Zigzag::Dir::Bwd});
}

inline Zigzag concat_zigzags(const Zigzag& a, const Zigzag& b) {
    if (*a.back() != *b.front()) throw ValidationError("zigzag endpoints do not meet");
    Zigzag z = a;
    z.nodes.insert(z.nodes.end(), b.nodes.begin() + 1, b.nodes.end());
    z.steps.insert(z.steps.end(), b.steps.begin(), b.steps.end());
    z.dirs.insert(z.dirs.end(), b.dirs.begin(), b.dirs.end());
    return z;
}

// Total measure-weighted kernel plus cokernel dimension over all steps.
inline Rat zigzag_cost(const Zigzag& z, const Measure& mu) {
    Rat total(0);
    for (const Morphism& f : z.steps) {
        require_same_poset(f.src->poset, mu.poset, "zigzag_cost");
        auto [ker, coker] = ker_coker_dims(f);
        total += integral(ker, mu) + integral(coker, mu);
    }
    return total;
}

// (integral |dim M - dim N|, integral (dim M + dim N)): the Hilbert-function
// bracket around the zigzag distance.
inline std::pair<Rat, Rat> hilbert_bounds(const PersistenceModule& m, const PersistenceModule& n,
                                          const Measure& mu) {
    require_same_poset(m.poset, n.poset, "hilbert_bounds");
    require_same_poset(m.poset, mu.poset, "hilbert_bounds");
    Rat lo(0), hi(0);
    for (int p = 0; p < m.poset->point_count(); ++p) {
        int d = m.dims[p] - n.dims[p];
        lo += Rat(d < 0 ? -d : d) * mu.w[p];
        hi += Rat(m.dims[p] + n.dims[p]) * mu.w[p];
    }
    return {lo, hi};
}

struct DirectSum {
    ModulePtr total;
    std::vector<Morphism> injections;
    std::vector<Morphism> projections;
};

inline DirectSum direct_sum(const std::vector<ModulePtr>& parts) {
    if (parts.empty()) throw ValidationError("direct_sum needs at least one summand");
    PosetPtr poset = parts[0]->poset;
    const int np = poset->point_count();
    std::vector<int> dims(np, 0);
    std::vector<int> offset_at(parts.size() * np, 0);
    for (size_t s = 0; s < parts.size(); ++s) {
        require_same_poset(poset, parts[s]->poset, "direct_sum");
        for (int p = 0; p < np; ++p) {
            offset_at[s * np + p] = dims[p];
            dims[p] += parts[s]->dims[p];
        }
    }
    std::vector<Mat> arrows;
    for (int k = 0; k < poset->arrow_count(); ++k) {
        Arrow a = poset->arrow(k);
        Mat blk(dims[a.tgt], dims[a.src]);
        for (size_t s = 0; s < parts.size(); ++s) {
            const Mat& sub = parts[s]->arrows[k];
            int ro = offset_at[s * np + a.tgt], co = offset_at[s * np + a.src];
            for (int i = 0; i < sub.rows; ++i)
                for (int j = 0; j < sub.cols; ++j) blk.at(ro + i, co + j) = sub.at(i, j);
        }
        arrows.push_back(std::move(blk));
    }
    DirectSum ds;
    ds.total = make_module(poset, dims, std::move(arrows));
    for (size_t s = 0; s < parts.size(); ++s) {
        std::vector<Mat> inj, prj;
        for (int p = 0; p < np; ++p) {
            Mat in(ds.total->dims[p], parts[s]->dims[p]);
            Mat pr(parts[s]->dims[p], ds.total->dims[p]);
            int off = offset_at[s * np + p];
            for (int i = 0; i < parts[s]->dims[p]; ++i) {
                in.at(off + i, i) = Fp(1);
                pr.at(i, off + i) = Fp(1);
            }
            inj.push_back(std::move(in));
            prj.push_back(std::move(pr));
        }
        ds.injections.push_back(make_morphism(parts[s], ds.total, std::move(inj)));
        ds.projections.push_back(make_morphism(ds.total, parts[s], std::move(prj)));
    }
    return ds;
}

// Searches the natural-transformation space for a pointwise invertible
// element. Draws from a fixed stream, so the outcome is deterministic; a
// returned morphism is a certified isomorphism, nullopt only means the search
// gave up.
inline std::optional<Morphism> find_natural_isomorphism(const ModulePtr& a, const ModulePtr& b,
                                                        int attempts = 500) {
    require_same_poset(a->poset, b->poset, "find_natural_isomorphism");
    if (a->dims != b->dims) return std::nullopt;
    const Poset& P = *a->poset;
    const int np = P.point_count();

    // unknowns: entries of phi(p): b(p) x a(p), stacked point by point
    std::vector<int> off(np + 1, 0);
    for (int p = 0; p < np; ++p) off[p + 1] = off[p] + a->dims[p] * a->dims[p];
    int nrows = 0;
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow ar = P.arrow(k);
        nrows += a->dims[ar.tgt] * a->dims[ar.src];
    }
    Mat C(nrows, off[np]);
    int row = 0;
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow ar = P.arrow(k);
        const Mat& AA = a->arrows[k];
        const Mat& BA = b->arrows[k];
        // phi_t * AA - BA * phi_s = 0 at entry (i, j)
        for (int i = 0; i < a->dims[ar.tgt]; ++i)
            for (int j = 0; j < a->dims[ar.src]; ++j) {
                for (int q = 0; q < a->dims[ar.tgt]; ++q)
                    C.at(row, off[ar.tgt] + i * a->dims[ar.tgt] + q) += AA.at(q, j);
                for (int q = 0; q < a->dims[ar.src]; ++q)
                    C.at(row, off[ar.src] + q * a->dims[ar.src] + j) -= BA.at(i, q);
                ++row;
            }
    }
    Mat homs = kernel_basis(C);

    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto draw = [&state]() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    for (int attempt = 0; attempt < attempts; ++attempt) {
        std::vector<Fp> coeffs(homs.cols);
        for (auto& c : coeffs) c = Fp(static_cast<std::int64_t>(draw() % field_prime()));
        std::vector<Mat> phi(np);
        bool ok = true;
        for (int p = 0; p < np && ok; ++p) {
            Mat f(a->dims[p], a->dims[p]);
            for (int i = 0; i < f.rows; ++i)
                for (int j = 0; j < f.cols; ++j) {
                    Fp s(0);
                    for (int c = 0; c < homs.cols; ++c)
                        s += coeffs[c] * homs.at(off[p] + i * a->dims[p] + j, c);
                    f.at(i, j) = s;
                }
            if (f.rows > 0 && rank(f) != f.rows) ok = false;
            phi[p] = std::move(f);
        }
        if (ok) return make_morphism(a, b, std::move(phi));
    }
    return std::nullopt;
}

struct ImageFactorization {
    ModulePtr image;
    Morphism epi;   // src -> image
    Morphism mono;  // image -> tgt
};

// Factors f through its image; ker(epi) = ker(f) and coker(mono) = coker(f)
// pointwise.
inline ImageFactorization image_factorize(const Morphism& f) {
    const Poset& P = *f.src->poset;
    const int np = P.point_count();
    std::vector<Mat> basis(np);  // columns span im f(p) inside tgt(p)
    std::vector<int> dims(np);
    for (int p = 0; p < np; ++p) {
        Mat e = f.comps[p];
        Mat fr = f.comps[p];
        std::vector<int> piv = row_echelon(e);
        Mat b(f.tgt->dims[p], static_cast<int>(piv.size()));
        for (size_t c = 0; c < piv.size(); ++c)
            for (int i = 0; i < fr.rows; ++i) b.at(i, static_cast<int>(c)) = fr.at(i, piv[c]);
        dims[p] = b.cols;
        basis[p] = std::move(b);
    }
    std::vector<Mat> arrows;
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        auto x = solve_mat(basis[a.tgt], mul(f.tgt->arrows[k], basis[a.src]));
        if (!x) throw ValidationError("image is not preserved by structure maps");
        arrows.push_back(std::move(*x));
    }
    ImageFactorization out;
    out.image = make_module(f.src->poset, dims, std::move(arrows));
    std::vector<Mat> epi_comps, mono_comps;
    for (int p = 0; p < np; ++p) {
        auto e = solve_mat(basis[p], f.comps[p]);
        if (!e) throw ValidationError("image factorization failed");
        epi_comps.push_back(std::move(*e));
        mono_comps.push_back(basis[p]);
    }
    out.epi = make_morphism(f.src, out.image, std::move(epi_comps));
    out.mono = make_morphism(out.image, f.tgt, std::move(mono_comps));
    return out;
}

// Replaces every step by its epi-mono expansion through the image. The cost
// is unchanged.
inline Zigzag expand_through_images(const Zigzag& z) {
    if (z.length() == 0) return z;
    std::vector<ModulePtr> nodes{z.nodes[0]};
    std::vector<Morphism> steps;
    std::vector<Zigzag::Dir> dirs;
    for (int i = 0; i < z.length(); ++i) {
        ImageFactorization fac = image_factorize(z.steps[i]);
        if (z.dirs[i] == Zigzag::Dir::Fwd) {
            nodes.push_back(fac.image);
            nodes.push_back(z.nodes[i + 1]);
            steps.push_back(fac.epi);
            steps.push_back(fac.mono);
            dirs.push_back(Zigzag::Dir::Fwd);
            dirs.push_back(Zigzag::Dir::Fwd);
        } else {
            nodes.push_back(fac.image);
            nodes.push_back(z.nodes[i + 1]);
            steps.push_back(fac.mono);
            steps.push_back(fac.epi);
            dirs.push_back(Zigzag::Dir::Bwd);
            dirs.push_back(Zigzag::Dir::Bwd);
        }
    }
    return make_zigzag(std::move(nodes), std::move(steps), std::move(dirs));
}

}  // namespace pmw
