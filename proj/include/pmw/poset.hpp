#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "pmw/errors.hpp"
#include "pmw/rational.hpp"

namespace pmw {

enum class Orient { Fwd, Bwd };

// A generating arrow between two poset points.
struct Arrow {
    int src = 0, tgt = 0;
};

// Finite indexing poset: a linear quiver with per-edge orientation, or a
// 2-D grid with the product order. Points are indexed 0..point_count()-1;
// grid index is ix + iy * nx.
struct Poset {
    enum class Kind { Linear, Grid } kind = Kind::Linear;

    // linear
    std::vector<Rat> coords;
    std::vector<Orient> orients;

    // grid
    std::vector<Rat> xs, ys;

    static std::shared_ptr<const Poset> linear(std::vector<Rat> coords, std::vector<Orient> orients) {
        auto p = std::make_shared<Poset>();
        p->kind = Kind::Linear;
        p->coords = std::move(coords);
        p->orients = std::move(orients);
        if (p->coords.empty()) throw ValidationError("linear poset needs at least one point");
        if (p->orients.size() + 1 != p->coords.size())
            throw ValidationError("linear poset needs one orientation per edge");
        for (size_t i = 1; i < p->coords.size(); ++i)
            if (!(p->coords[i - 1] < p->coords[i]))
                throw ValidationError("linear poset coordinates must strictly increase");
        return p;
    }

    // All edges forward, integer-like coordinates supplied by the caller.
    static std::shared_ptr<const Poset> ordered_linear(std::vector<Rat> coords) {
        std::vector<Orient> o(coords.empty() ? 0 : coords.size() - 1, Orient::Fwd);
        return linear(std::move(coords), std::move(o));
    }

    static std::shared_ptr<const Poset> grid(std::vector<Rat> xs, std::vector<Rat> ys) {
        auto p = std::make_shared<Poset>();
        p->kind = Kind::Grid;
        p->xs = std::move(xs);
        p->ys = std::move(ys);
        if (p->xs.empty() || p->ys.empty()) throw ValidationError("grid poset needs nonempty axes");
        for (size_t i = 1; i < p->xs.size(); ++i)
            if (!(p->xs[i - 1] < p->xs[i])) throw ValidationError("grid x coordinates must strictly increase");
        for (size_t i = 1; i < p->ys.size(); ++i)
            if (!(p->ys[i - 1] < p->ys[i])) throw ValidationError("grid y coordinates must strictly increase");
        return p;
    }

    bool is_linear() const { return kind == Kind::Linear; }
    bool is_grid() const { return kind == Kind::Grid; }

    int nx() const { return static_cast<int>(xs.size()); }
    int ny() const { return static_cast<int>(ys.size()); }

    int point_count() const {
        return is_linear() ? static_cast<int>(coords.size()) : nx() * ny();
    }

    int grid_index(int ix, int iy) const { return ix + iy * nx(); }
    int grid_ix(int p) const { return p % nx(); }
    int grid_iy(int p) const { return p / nx(); }

    // Every edge forward (grids are always ordered).
    bool ordered() const {
        if (is_grid()) return true;
        for (Orient o : orients)
            if (o == Orient::Bwd) return false;
        return true;
    }

    int arrow_count() const {
        if (is_linear()) return point_count() - 1;
        return (nx() - 1) * ny() + nx() * (ny() - 1);
    }

    // Linear: arrow k joins points k,k+1 oriented per orients[k].
    // Grid: first all +x arrows (iy major, ix minor), then all +y arrows.
    Arrow arrow(int k) const {
        if (is_linear()) {
            if (orients[k] == Orient::Fwd) return {k, k + 1};
            return {k + 1, k};
        }
        int nright = (nx() - 1) * ny();
        if (k < nright) {
            int ix = k % (nx() - 1), iy = k / (nx() - 1);
            return {grid_index(ix, iy), grid_index(ix + 1, iy)};
        }
        k -= nright;
        int ix = k % nx(), iy = k / nx();
        return {grid_index(ix, iy), grid_index(ix, iy + 1)};
    }

    int right_arrow(int ix, int iy) const { return ix + iy * (nx() - 1); }
    int up_arrow(int ix, int iy) const { return (nx() - 1) * ny() + ix + iy * nx(); }

    // p <= q in the category: directed path from p to q.
    bool leq(int p, int q) const {
        if (is_grid())
            return grid_ix(p) <= grid_ix(q) && grid_iy(p) <= grid_iy(q);
        if (p == q) return true;
        int lo = std::min(p, q), hi = std::max(p, q);
        Orient need = p < q ? Orient::Fwd : Orient::Bwd;
        for (int e = lo; e < hi; ++e)
            if (orients[e] != need) return false;
        return true;
    }

    friend bool operator==(const Poset& a, const Poset& b) {
        return a.kind == b.kind && a.coords == b.coords && a.orients == b.orients &&
               a.xs == b.xs && a.ys == b.ys;
    }
    friend bool operator!=(const Poset& a, const Poset& b) { return !(a == b); }
};

using PosetPtr = std::shared_ptr<const Poset>;

inline bool same_poset(const PosetPtr& a, const PosetPtr& b) {
    return a == b || (a && b && *a == *b);
}

// Nonnegative rational weight per poset point.
struct Measure {
    enum class Kind { Counting, Weights, LebesgueCells } kind = Kind::Counting;
    PosetPtr poset;
    std::vector<Rat> w;

    const Rat& weight(int p) const { return w[p]; }
};

inline Measure counting_measure(PosetPtr poset) {
    Measure m;
    m.kind = Measure::Kind::Counting;
    m.poset = poset;
    m.w.assign(poset->point_count(), Rat(1));
    return m;
}

inline Measure weights_measure(PosetPtr poset, std::vector<Rat> w) {
    if (static_cast<int>(w.size()) != poset->point_count())
        throw ValidationError("measure needs one weight per poset point");
    for (const Rat& x : w)
        if (x < 0) throw ValidationError("measure weights must be nonnegative");
    Measure m;
    m.kind = Measure::Kind::Weights;
    m.poset = poset;
    m.w = std::move(w);
    return m;
}

// Each point carries the size of the half-open cell to the next coordinate;
// the last coordinate per axis closes the domain with an empty cell.
inline Measure lebesgue_cell_measure(PosetPtr poset) {
    auto width = [](const std::vector<Rat>& cs, int i) {
        return i + 1 < static_cast<int>(cs.size()) ? Rat(cs[i + 1] - cs[i]) : Rat(0);
    };
    Measure m;
    m.kind = Measure::Kind::LebesgueCells;
    m.poset = poset;
    if (poset->is_linear()) {
        for (int i = 0; i < poset->point_count(); ++i) m.w.push_back(width(poset->coords, i));
    } else {
        m.w.resize(poset->point_count());
        for (int iy = 0; iy < poset->ny(); ++iy)
            for (int ix = 0; ix < poset->nx(); ++ix)
                m.w[poset->grid_index(ix, iy)] = width(poset->xs, ix) * width(poset->ys, iy);
    }
    return m;
}

// Contiguous nonempty index range [lo, hi] on a linear poset.
struct Interval {
    PosetPtr poset;
    int lo = 0, hi = 0;

    Interval() = default;
    Interval(PosetPtr p, int l, int h) : poset(std::move(p)), lo(l), hi(h) {
        if (!poset || !poset->is_linear()) throw ValidationError("intervals live on linear posets");
        if (l < 0 || h >= poset->point_count() || l > h)
            throw ValidationError("interval indices out of range");
    }

    int length() const { return hi - lo + 1; }
    bool contains(int p) const { return lo <= p && p <= hi; }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi && same_poset(a.poset, b.poset);
    }
};

inline void require_same_poset(const PosetPtr& a, const PosetPtr& b, const char* what) {
    if (!same_poset(a, b)) throw ValidationError(std::string("poset mismatch in ") + what);
}

inline Rat measure_of(const Interval& iv, const Measure& mu) {
    require_same_poset(iv.poset, mu.poset, "measure_of");
    Rat s(0);
    for (int p = iv.lo; p <= iv.hi; ++p) s += mu.weight(p);
    return s;
}

inline Rat symmetric_difference_measure(const Interval& i, const Interval& j, const Measure& mu) {
    require_same_poset(i.poset, j.poset, "symmetric_difference_measure");
    require_same_poset(i.poset, mu.poset, "symmetric_difference_measure");
    Rat s(0);
    int lo = std::min(i.lo, j.lo), hi = std::max(i.hi, j.hi);
    for (int p = lo; p <= hi; ++p)
        if (i.contains(p) != j.contains(p)) s += mu.weight(p);
    return s;
}

// I <= J: every point of I has a point of J above it and every point of J a
// point of I below it. Requires an ordered poset.
inline bool interval_leq(const Interval& i, const Interval& j) {
    require_same_poset(i.poset, j.poset, "interval_leq");
    if (!i.poset->ordered()) throw ValidationError("interval_leq needs an ordered poset");
    return i.lo <= j.lo && i.hi <= j.hi;
}

// I strictly inside J: J has points strictly below and strictly above all of I.
inline bool interval_strictly_inside(const Interval& i, const Interval& j) {
    require_same_poset(i.poset, j.poset, "interval_strictly_inside");
    return j.lo < i.lo && i.hi < j.hi;
}

inline bool intervals_intersect(const Interval& i, const Interval& j) {
    return std::max(i.lo, j.lo) <= std::min(i.hi, j.hi);
}

// Multiset of intervals, stored as counts.
struct Barcode {
    PosetPtr poset;
    // sorted by (lo, hi), multiplicities positive
    std::vector<std::pair<Interval, int>> items;

    explicit Barcode(PosetPtr p = nullptr) : poset(std::move(p)) {}

    void add(const Interval& iv, int mult = 1) {
        if (mult == 0) return;
        if (!poset) poset = iv.poset;
        require_same_poset(poset, iv.poset, "Barcode::add");
        for (auto& it : items)
            if (it.first.lo == iv.lo && it.first.hi == iv.hi) {
                it.second += mult;
                if (it.second < 0) throw ValidationError("negative barcode multiplicity");
                return;
            }
        if (mult < 0) throw ValidationError("negative barcode multiplicity");
        items.emplace_back(iv, mult);
    }

    void normalize() {
        std::erase_if(items, [](const auto& it) { return it.second == 0; });
        std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
            return std::pair(a.first.lo, a.first.hi) < std::pair(b.first.lo, b.first.hi);
        });
    }

    int total_count() const {
        int n = 0;
        for (const auto& it : items) n += it.second;
        return n;
    }

    // Expands multiplicities into a flat list.
    std::vector<Interval> expanded() const {
        std::vector<Interval> v;
        for (const auto& it : items)
            for (int k = 0; k < it.second; ++k) v.push_back(it.first);
        return v;
    }

    friend bool operator==(const Barcode& a, const Barcode& b) {
        Barcode x = a, y = b;
        x.normalize();
        y.normalize();
        if (x.items.size() != y.items.size()) return false;
        for (size_t i = 0; i < x.items.size(); ++i)
            if (x.items[i].first.lo != y.items[i].first.lo ||
                x.items[i].first.hi != y.items[i].first.hi ||
                x.items[i].second != y.items[i].second)
                return false;
        return same_poset(a.poset, b.poset);
    }
};

}  // namespace pmw
