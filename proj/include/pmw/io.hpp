#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pmw/decompose.hpp"
#include "pmw/h0.hpp"
#include "pmw/module.hpp"
#include "pmw/poset.hpp"

namespace pmw {

// Text formats. A module file declares its poset, its measure and one of
// three content forms:
//
//   pmod v1
//   poset linear
//   coords 1 2 3 4 5
//   orients > > < <
//   measure counting
//   intervals
//   1 3
//   3 5 x2
//   end
//
// Raw form replaces the intervals block with "dims ..." plus a "maps" block
// of one "arrow ..." header per generating arrow followed by its rows; graph
// form carries "vertex NAME pt.." / "edge A B pt.." lines with appearance
// antichains. Interval endpoints are coordinates, matrices are integers
// reduced into the active field. '#' starts a comment line.

namespace iodetail {

struct Lines {
    std::vector<std::string> rows;
    size_t pos = 0;
    std::string origin;

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << origin << ":" << pos << ": " << msg;
        throw ParseError(os.str());
    }

    bool done() const { return pos >= rows.size(); }

    std::vector<std::string> next() {
        while (!done()) {
            const std::string& line = rows[pos++];
            std::istringstream is(line);
            std::vector<std::string> toks;
            std::string t;
            while (is >> t) toks.push_back(t);
            if (toks.empty() || toks[0][0] == '#') continue;
            return toks;
        }
        fail("unexpected end of file");
    }

    std::optional<std::vector<std::string>> peek() {
        size_t saved = pos;
        while (!done()) {
            const std::string& line = rows[pos++];
            std::istringstream is(line);
            std::vector<std::string> toks;
            std::string t;
            while (is >> t) toks.push_back(t);
            if (toks.empty() || toks[0][0] == '#') continue;
            pos = saved;
            return toks;
        }
        pos = saved;
        return std::nullopt;
    }
};

inline Lines split_lines(const std::string& text, std::string origin) {
    Lines l;
    l.origin = std::move(origin);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) l.rows.push_back(line);
    return l;
}

inline Rat parse_rat_tok(Lines& l, const std::string& tok) {
    try {
        return parse_rat(tok);
    } catch (const std::invalid_argument& e) {
        l.fail(e.what());
    }
}

inline long parse_int_tok(Lines& l, const std::string& tok) {
    try {
        size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        l.fail("expected an integer, got '" + tok + "'");
    }
}

inline int coord_index(Lines& l, const std::vector<Rat>& coords, const Rat& c) {
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == c) return static_cast<int>(i);
    l.fail("coordinate " + rat_str(c) + " is not a poset coordinate");
}

}  // namespace iodetail

struct ModuleDoc {
    enum class Form { Intervals, Raw, Graph } form = Form::Raw;

    ModulePtr module;
    Measure measure;
    Barcode intervals;      // Form::Intervals
    GraphFiltration graph;  // Form::Graph
};

inline ModuleDoc parse_module_doc(const std::string& text, const std::string& origin = "<string>") {
    using namespace iodetail;
    Lines l = split_lines(text, origin);
    if (l.next() != std::vector<std::string>{"pmod", "v1"}) l.fail("expected 'pmod v1' header");

    auto kind = l.next();
    if (kind.size() != 2 || kind[0] != "poset") l.fail("expected 'poset linear|grid'");
    PosetPtr poset;
    bool linear = kind[1] == "linear";
    if (!linear && kind[1] != "grid") l.fail("unknown poset kind '" + kind[1] + "'");

    try {
        if (linear) {
            auto ctoks = l.next();
            if (ctoks[0] != "coords") l.fail("expected 'coords'");
            std::vector<Rat> coords;
            for (size_t i = 1; i < ctoks.size(); ++i) coords.push_back(parse_rat_tok(l, ctoks[i]));
            std::vector<Orient> orients;
            auto p = l.peek();
            if (p && (*p)[0] == "orients") {
                auto otoks = l.next();
                for (size_t i = 1; i < otoks.size(); ++i) {
                    if (otoks[i] == ">")
                        orients.push_back(Orient::Fwd);
                    else if (otoks[i] == "<")
                        orients.push_back(Orient::Bwd);
                    else
                        l.fail("orientation tokens are '>' or '<'");
                }
            } else if (coords.size() > 1) {
                l.fail("expected 'orients'");
            }
            poset = Poset::linear(std::move(coords), std::move(orients));
        } else {
            auto xt = l.next();
            if (xt[0] != "xcoords") l.fail("expected 'xcoords'");
            std::vector<Rat> xs;
            for (size_t i = 1; i < xt.size(); ++i) xs.push_back(parse_rat_tok(l, xt[i]));
            auto yt = l.next();
            if (yt[0] != "ycoords") l.fail("expected 'ycoords'");
            std::vector<Rat> ys;
            for (size_t i = 1; i < yt.size(); ++i) ys.push_back(parse_rat_tok(l, yt[i]));
            poset = Poset::grid(std::move(xs), std::move(ys));
        }

        ModuleDoc doc;
        auto mt = l.next();
        if (mt[0] != "measure") l.fail("expected 'measure'");
        if (mt.size() == 2 && mt[1] == "counting") {
            doc.measure = counting_measure(poset);
        } else if (mt.size() == 2 && mt[1] == "lebesgue-cells") {
            doc.measure = lebesgue_cell_measure(poset);
        } else if (mt.size() >= 2 && mt[1] == "weights") {
            std::vector<Rat> w;
            for (size_t i = 2; i < mt.size(); ++i) w.push_back(parse_rat_tok(l, mt[i]));
            doc.measure = weights_measure(poset, std::move(w));
        } else {
            l.fail("measure is 'counting', 'lebesgue-cells' or 'weights ...'");
        }

        auto body = l.next();
        if (body[0] == "intervals") {
            if (!linear) l.fail("interval blocks need a linear poset");
            doc.form = ModuleDoc::Form::Intervals;
            doc.intervals = Barcode(poset);
            for (auto toks = l.next(); toks[0] != "end"; toks = l.next()) {
                if (toks.size() != 2 && toks.size() != 3) l.fail("interval lines are 'lo hi [xN]'");
                int lo = coord_index(l, poset->coords, parse_rat_tok(l, toks[0]));
                int hi = coord_index(l, poset->coords, parse_rat_tok(l, toks[1]));
                int mult = 1;
                if (toks.size() == 3) {
                    if (toks[2].size() < 2 || toks[2][0] != 'x') l.fail("multiplicity looks like 'x3'");
                    mult = static_cast<int>(parse_int_tok(l, toks[2].substr(1)));
                    if (mult <= 0) l.fail("multiplicity must be positive");
                }
                if (lo > hi) l.fail("interval endpoints out of order");
                doc.intervals.add(Interval(poset, lo, hi), mult);
            }
            doc.intervals.normalize();
            doc.module = module_from_barcode(doc.intervals).module;
        } else if (body[0] == "dims") {
            doc.form = ModuleDoc::Form::Raw;
            std::vector<int> dims;
            for (size_t i = 1; i < body.size(); ++i)
                dims.push_back(static_cast<int>(parse_int_tok(l, body[i])));
            if (static_cast<int>(dims.size()) != poset->point_count())
                l.fail("dims needs one entry per poset point");
            auto mp = l.next();
            if (mp != std::vector<std::string>{"maps"}) l.fail("expected 'maps'");
            std::vector<Mat> arrows;
            for (int k = 0; k < poset->arrow_count(); ++k) {
                Arrow a = poset->arrow(k);
                arrows.emplace_back(dims[a.tgt], dims[a.src]);
            }
            for (auto toks = l.next(); toks[0] != "end"; toks = l.next()) {
                if (toks[0] != "arrow") l.fail("expected 'arrow' or 'end'");
                int k = -1;
                if (linear) {
                    if (toks.size() != 2) l.fail("linear arrows are 'arrow K'");
                    k = static_cast<int>(parse_int_tok(l, toks[1]));
                    if (k < 0 || k >= poset->arrow_count()) l.fail("arrow index out of range");
                } else {
                    if (toks.size() != 4) l.fail("grid arrows are 'arrow right|up IX IY'");
                    int ix = static_cast<int>(parse_int_tok(l, toks[2]));
                    int iy = static_cast<int>(parse_int_tok(l, toks[3]));
                    if (toks[1] == "right") {
                        if (ix < 0 || ix + 1 >= poset->nx() || iy < 0 || iy >= poset->ny())
                            l.fail("arrow position out of range");
                        k = poset->right_arrow(ix, iy);
                    } else if (toks[1] == "up") {
                        if (ix < 0 || ix >= poset->nx() || iy < 0 || iy + 1 >= poset->ny())
                            l.fail("arrow position out of range");
                        k = poset->up_arrow(ix, iy);
                    } else {
                        l.fail("grid arrow direction is 'right' or 'up'");
                    }
                }
                Mat& m = arrows[k];
                for (int r = 0; r < m.rows; ++r) {
                    if (m.cols == 0) break;
                    auto row = l.next();
                    if (static_cast<int>(row.size()) != m.cols) l.fail("matrix row width mismatch");
                    for (int c = 0; c < m.cols; ++c) m.at(r, c) = Fp(parse_int_tok(l, row[c]));
                }
            }
            doc.module = make_module(poset, std::move(dims), std::move(arrows));
        } else if (body[0] == "graph") {
            doc.form = ModuleDoc::Form::Graph;
            doc.graph.poset = poset;
            const int coords_per_point = linear ? 1 : 2;
            auto parse_points = [&](const std::vector<std::string>& toks, size_t from) {
                std::vector<int> pts;
                if ((toks.size() - from) % coords_per_point != 0 || toks.size() == from)
                    l.fail("appearance list length mismatch");
                for (size_t i = from; i < toks.size(); i += coords_per_point) {
                    if (linear) {
                        pts.push_back(coord_index(l, poset->coords, parse_rat_tok(l, toks[i])));
                    } else {
                        int ix = coord_index(l, poset->xs, parse_rat_tok(l, toks[i]));
                        int iy = coord_index(l, poset->ys, parse_rat_tok(l, toks[i + 1]));
                        pts.push_back(poset->grid_index(ix, iy));
                    }
                }
                return pts;
            };
            std::map<std::string, int> vid;
            for (auto toks = l.next(); toks[0] != "end"; toks = l.next()) {
                if (toks[0] == "vertex") {
                    if (toks.size() < 2) l.fail("vertex lines are 'vertex NAME pts..'");
                    if (vid.count(toks[1])) l.fail("duplicate vertex '" + toks[1] + "'");
                    vid[toks[1]] = static_cast<int>(doc.graph.vertices.size());
                    doc.graph.vertices.push_back({toks[1], parse_points(toks, 2)});
                } else if (toks[0] == "edge") {
                    if (toks.size() < 3) l.fail("edge lines are 'edge A B pts..'");
                    if (!vid.count(toks[1]) || !vid.count(toks[2]))
                        l.fail("edge endpoint is not a declared vertex");
                    doc.graph.edges.push_back({vid[toks[1]], vid[toks[2]], parse_points(toks, 3)});
                } else {
                    l.fail("graph lines start with 'vertex' or 'edge'");
                }
            }
            doc.module = h0_of_graph_filtration(doc.graph);
        } else {
            l.fail("module body is 'intervals', 'dims' or 'graph'");
        }
        return doc;
    } catch (const ValidationError& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

inline std::string serialize_poset_and_measure(const PosetPtr& poset, const Measure& mu) {
    std::ostringstream os;
    if (poset->is_linear()) {
        os << "poset linear\ncoords";
        for (const Rat& c : poset->coords) os << " " << rat_str(c);
        os << "\norients";
        for (Orient o : poset->orients) os << " " << (o == Orient::Fwd ? ">" : "<");
        os << "\n";
    } else {
        os << "poset grid\nxcoords";
        for (const Rat& c : poset->xs) os << " " << rat_str(c);
        os << "\nycoords";
        for (const Rat& c : poset->ys) os << " " << rat_str(c);
        os << "\n";
    }
    switch (mu.kind) {
        case Measure::Kind::Counting: os << "measure counting\n"; break;
        case Measure::Kind::LebesgueCells: os << "measure lebesgue-cells\n"; break;
        case Measure::Kind::Weights:
            os << "measure weights";
            for (const Rat& w : mu.w) os << " " << rat_str(w);
            os << "\n";
            break;
    }
    return os.str();
}

inline std::string serialize_module_doc(const ModuleDoc& doc) {
    const PosetPtr& poset = doc.measure.poset;
    std::ostringstream os;
    os << "pmod v1\n" << serialize_poset_and_measure(poset, doc.measure);
    switch (doc.form) {
        case ModuleDoc::Form::Intervals: {
            os << "intervals\n";
            Barcode b = doc.intervals;
            b.normalize();
            for (const auto& [iv, mult] : b.items) {
                os << rat_str(poset->coords[iv.lo]) << " " << rat_str(poset->coords[iv.hi]);
                if (mult > 1) os << " x" << mult;
                os << "\n";
            }
            os << "end\n";
            break;
        }
        case ModuleDoc::Form::Raw: {
            os << "dims";
            for (int d : doc.module->dims) os << " " << d;
            os << "\nmaps\n";
            for (int k = 0; k < poset->arrow_count(); ++k) {
                const Mat& m = doc.module->arrows[k];
                if (m.rows == 0 || m.cols == 0) continue;
                if (poset->is_linear()) {
                    os << "arrow " << k << "\n";
                } else {
                    int nright = (poset->nx() - 1) * poset->ny();
                    if (k < nright)
                        os << "arrow right " << k % (poset->nx() - 1) << " " << k / (poset->nx() - 1)
                           << "\n";
                    else
                        os << "arrow up " << (k - nright) % poset->nx() << " "
                           << (k - nright) / poset->nx() << "\n";
                }
                for (int r = 0; r < m.rows; ++r) {
                    for (int c = 0; c < m.cols; ++c) os << (c ? " " : "") << m.at(r, c).v;
                    os << "\n";
                }
            }
            os << "end\n";
            break;
        }
        case ModuleDoc::Form::Graph: {
            os << "graph\n";
            auto write_points = [&](const std::vector<int>& pts) {
                for (int p : pts) {
                    if (poset->is_linear())
                        os << " " << rat_str(poset->coords[p]);
                    else
                        os << " " << rat_str(poset->xs[poset->grid_ix(p)]) << " "
                           << rat_str(poset->ys[poset->grid_iy(p)]);
                }
            };
            for (const auto& v : doc.graph.vertices) {
                os << "vertex " << v.name;
                write_points(v.appears);
                os << "\n";
            }
            for (const auto& e : doc.graph.edges) {
                os << "edge " << doc.graph.vertices[e.u].name << " " << doc.graph.vertices[e.v].name;
                write_points(e.appears);
                os << "\n";
            }
            os << "end\n";
            break;
        }
    }
    return os.str();
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
}

inline ModuleDoc load_module_file(const std::filesystem::path& path) {
    return parse_module_doc(read_file(path), path.string());
}

struct MorphismDoc {
    std::string source_ref, target_ref;  // as written in the file
    ModuleDoc source, target;
    Morphism morphism;
};

inline MorphismDoc parse_morphism_doc(const std::string& text, const std::filesystem::path& base_dir,
                                      const std::string& origin = "<string>") {
    using namespace iodetail;
    Lines l = split_lines(text, origin);
    if (l.next() != std::vector<std::string>{"pmorph", "v1"}) l.fail("expected 'pmorph v1' header");
    MorphismDoc doc;
    auto st = l.next();
    if (st.size() != 2 || st[0] != "source") l.fail("expected 'source PATH'");
    doc.source_ref = st[1];
    auto tt = l.next();
    if (tt.size() != 2 || tt[0] != "target") l.fail("expected 'target PATH'");
    doc.target_ref = tt[1];
    doc.source = load_module_file(base_dir / doc.source_ref);
    doc.target = load_module_file(base_dir / doc.target_ref);
    const ModulePtr& src = doc.source.module;
    const ModulePtr& tgt = doc.target.module;
    if (!same_poset(src->poset, tgt->poset))
        l.fail("source and target modules live on different posets");
    const PosetPtr& poset = src->poset;

    std::vector<Mat> comps;
    for (int p = 0; p < poset->point_count(); ++p) comps.emplace_back(tgt->dims[p], src->dims[p]);
    for (auto toks = l.next(); toks[0] != "end"; toks = l.next()) {
        if (toks[0] != "point") l.fail("expected 'point' or 'end'");
        int p = -1;
        if (poset->is_linear()) {
            if (toks.size() != 2) l.fail("linear points are 'point K'");
            p = static_cast<int>(parse_int_tok(l, toks[1]));
        } else {
            if (toks.size() != 3) l.fail("grid points are 'point IX IY'");
            int ix = static_cast<int>(parse_int_tok(l, toks[1]));
            int iy = static_cast<int>(parse_int_tok(l, toks[2]));
            if (ix < 0 || ix >= poset->nx() || iy < 0 || iy >= poset->ny())
                l.fail("point out of range");
            p = poset->grid_index(ix, iy);
        }
        if (p < 0 || p >= poset->point_count()) l.fail("point out of range");
        Mat& m = comps[p];
        for (int r = 0; r < m.rows; ++r) {
            if (m.cols == 0) break;
            auto row = l.next();
            if (static_cast<int>(row.size()) != m.cols) l.fail("matrix row width mismatch");
            for (int c = 0; c < m.cols; ++c) m.at(r, c) = Fp(parse_int_tok(l, row[c]));
        }
    }
    try {
        doc.morphism = make_morphism(src, tgt, std::move(comps));
    } catch (const ValidationError& e) {
        throw ParseError(origin + ": " + e.what());
    }
    return doc;
}

inline MorphismDoc load_morphism_file(const std::filesystem::path& path) {
    return parse_morphism_doc(read_file(path), path.parent_path(), path.string());
}

inline std::string serialize_morphism_doc(const MorphismDoc& doc) {
    std::ostringstream os;
    os << "pmorph v1\nsource " << doc.source_ref << "\ntarget " << doc.target_ref << "\n";
    const PosetPtr& poset = doc.morphism.src->poset;
    for (int p = 0; p < poset->point_count(); ++p) {
        const Mat& m = doc.morphism.comps[p];
        if (m.rows == 0 || m.cols == 0) continue;
        if (poset->is_linear())
            os << "point " << p << "\n";
        else
            os << "point " << poset->grid_ix(p) << " " << poset->grid_iy(p) << "\n";
        for (int r = 0; r < m.rows; ++r) {
            for (int c = 0; c < m.cols; ++c) os << (c ? " " : "") << m.at(r, c).v;
            os << "\n";
        }
    }
    os << "end\n";
    return os.str();
}

struct ZigzagDoc {
    std::vector<std::string> step_refs;
    std::vector<MorphismDoc> step_docs;
    Zigzag zigzag;
    Measure measure;  // taken from the first module file
};

inline ZigzagDoc parse_zigzag_doc(const std::string& text, const std::filesystem::path& base_dir,
                                  const std::string& origin = "<string>") {
    using namespace iodetail;
    Lines l = split_lines(text, origin);
    if (l.next() != std::vector<std::string>{"pzz", "v1"}) l.fail("expected 'pzz v1' header");
    ZigzagDoc doc;
    std::vector<Zigzag::Dir> dirs;
    for (auto toks = l.next(); toks[0] != "end"; toks = l.next()) {
        if (toks.size() != 3 || toks[0] != "step") l.fail("steps are 'step fwd|bwd PATH'");
        Zigzag::Dir d;
        if (toks[1] == "fwd")
            d = Zigzag::Dir::Fwd;
        else if (toks[1] == "bwd")
            d = Zigzag::Dir::Bwd;
        else
            l.fail("step direction is 'fwd' or 'bwd'");
        dirs.push_back(d);
        doc.step_refs.push_back(toks[2]);
        doc.step_docs.push_back(load_morphism_file(base_dir / toks[2]));
    }
    if (doc.step_docs.empty()) l.fail("zigzag has no steps");

    std::vector<ModulePtr> nodes;
    std::vector<Morphism> steps;
    for (size_t i = 0; i < doc.step_docs.size(); ++i) {
        const Morphism& f = doc.step_docs[i].morphism;
        ModulePtr here = dirs[i] == Zigzag::Dir::Fwd ? f.src : f.tgt;
        ModulePtr next = dirs[i] == Zigzag::Dir::Fwd ? f.tgt : f.src;
        if (i == 0) nodes.push_back(here);
        nodes.push_back(next);
        steps.push_back(f);
    }
    try {
        doc.zigzag = make_zigzag(std::move(nodes), std::move(steps), std::move(dirs));
    } catch (const ValidationError& e) {
        throw ParseError(origin + ": " + e.what());
    }
    doc.measure = doc.step_docs[0].source.measure;
    return doc;
}

inline ZigzagDoc load_zigzag_file(const std::filesystem::path& path) {
    return parse_zigzag_doc(read_file(path), path.parent_path(), path.string());
}

inline std::string serialize_zigzag_doc(const ZigzagDoc& doc) {
    std::ostringstream os;
    os << "pzz v1\n";
    for (size_t i = 0; i < doc.step_refs.size(); ++i)
        os << "step " << (doc.zigzag.dirs[i] == Zigzag::Dir::Fwd ? "fwd" : "bwd") << " "
           << doc.step_refs[i] << "\n";
    os << "end\n";
    return os.str();
}

}  // namespace pmw
