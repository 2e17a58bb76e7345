#pragma once

#include <string>
#include <vector>

#include "pmw/module.hpp"

namespace pmw {

class DisjointSet {
  public:
    explicit DisjointSet(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x != y) parent_[std::max(x, y)] = std::min(x, y);
    }

  private:
    std::vector<int> parent_;
};

// A graph whose simplices enter at the upset of an antichain of poset points.
struct GraphFiltration {
    struct Vertex {
        std::string name;
        std::vector<int> appears;  // antichain of point indices
    };
    struct Edge {
        int u = 0, v = 0;  // vertex indices
        std::vector<int> appears;
    };

    PosetPtr poset;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    bool vertex_present(int vi, int p) const { return present(vertices[vi].appears, p); }
    bool edge_present(int ei, int p) const { return present(edges[ei].appears, p); }

  private:
    bool present(const std::vector<int>& appears, int p) const {
        for (int a : appears)
            if (poset->leq(a, p)) return true;
        return false;
    }
};

inline void validate_filtration(const GraphFiltration& g) {
    auto check_antichain = [&](const std::vector<int>& pts, const std::string& what) {
        if (pts.empty()) throw ValidationError(what + " has no appearance point");
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = 0; j < pts.size(); ++j)
                if (i != j && g.poset->leq(pts[i], pts[j]))
                    throw ValidationError(what + " appearance set is not an antichain");
    };
    for (const auto& v : g.vertices) check_antichain(v.appears, "vertex " + v.name);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const auto& ed = g.edges[e];
        if (ed.u < 0 || ed.v < 0 || ed.u >= static_cast<int>(g.vertices.size()) ||
            ed.v >= static_cast<int>(g.vertices.size()) || ed.u == ed.v)
            throw ValidationError("edge endpoints out of range");
        check_antichain(ed.appears, "edge " + std::to_string(e));
        // an edge may not enter before both endpoints
        for (int q : ed.appears)
            if (!g.vertex_present(ed.u, q) || !g.vertex_present(ed.v, q))
                throw ValidationError("edge " + g.vertices[ed.u].name + "-" + g.vertices[ed.v].name +
                                      " appears before an endpoint");
    }
}

// H0 of the filtration: at each point the free vector space on connected
// components of the present subgraph, arrows induced by component merging.
// Components are ordered by their smallest vertex index.
inline ModulePtr h0_of_graph_filtration(const GraphFiltration& g) {
    validate_filtration(g);
    const Poset& P = *g.poset;
    const int np = P.point_count();
    const int nv = static_cast<int>(g.vertices.size());

    std::vector<std::vector<int>> comp(np, std::vector<int>(nv, -1));
    std::vector<int> dims(np, 0);
    for (int p = 0; p < np; ++p) {
        DisjointSet ds(nv);
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (g.edge_present(static_cast<int>(e), p)) ds.unite(g.edges[e].u, g.edges[e].v);
        int next = 0;
        for (int v = 0; v < nv; ++v) {
            if (!g.vertex_present(v, p)) continue;
            int r = ds.find(v);
            if (comp[p][r] < 0) comp[p][r] = next++;
            comp[p][v] = comp[p][r];
        }
        dims[p] = next;
    }

    std::vector<Mat> arrows;
    for (int k = 0; k < P.arrow_count(); ++k) {
        Arrow a = P.arrow(k);
        Mat m(dims[a.tgt], dims[a.src]);
        for (int v = 0; v < nv; ++v) {
            int cs = comp[a.src][v];
            if (cs < 0) continue;
            m.at(comp[a.tgt][v], cs) = Fp(1);
        }
        arrows.push_back(std::move(m));
    }
    return make_module(g.poset, std::move(dims), std::move(arrows));
}

// Canonical H0 map induced by a pointwise inclusion of filtrations over the
// same vertex list: each component goes to the component containing it.
inline Morphism h0_induced_morphism(const GraphFiltration& from, const GraphFiltration& to,
                                    ModulePtr mfrom, ModulePtr mto) {
    require_same_poset(from.poset, to.poset, "h0_induced_morphism");
    if (from.vertices.size() != to.vertices.size())
        throw ValidationError("filtrations must share a vertex list");
    const Poset& P = *from.poset;
    const int nv = static_cast<int>(from.vertices.size());
    std::vector<Mat> comps;
    for (int p = 0; p < P.point_count(); ++p) {
        DisjointSet dsf(nv), dst(nv);
        for (size_t e = 0; e < from.edges.size(); ++e)
            if (from.edge_present(static_cast<int>(e), p)) dsf.unite(from.edges[e].u, from.edges[e].v);
        for (size_t e = 0; e < to.edges.size(); ++e)
            if (to.edge_present(static_cast<int>(e), p)) dst.unite(to.edges[e].u, to.edges[e].v);
        std::vector<int> cf(nv, -1), ct(nv, -1);
        int nf = 0, nt = 0;
        for (int v = 0; v < nv; ++v) {
            if (from.vertex_present(v, p)) {
                int r = dsf.find(v);
                if (cf[r] < 0) cf[r] = nf++;
                cf[v] = cf[r];
            }
            if (to.vertex_present(v, p)) {
                int r = dst.find(v);
                if (ct[r] < 0) ct[r] = nt++;
                ct[v] = ct[r];
            }
        }
        Mat m(nt, nf);
        for (int v = 0; v < nv; ++v) {
            if (cf[v] < 0) continue;
            if (ct[v] < 0)
                throw ValidationError("filtration does not include into the target");
            m.at(ct[v], cf[v]) = Fp(1);
        }
        comps.push_back(std::move(m));
    }
    return make_morphism(std::move(mfrom), std::move(mto), std::move(comps));
}

}  // namespace pmw
