// Regenerates the derived fixture files (morphism matrices, raw module
// copies, the quotient summand of the second two-parameter example) from the
// hand-written filtration files. Usage: gen_fixtures FIXTURE_DIR

#include <filesystem>
#include <iostream>

#include "pmw/io.hpp"

using namespace pmw;
namespace fs = std::filesystem;

namespace {

void write_morphism(const fs::path& dir, const std::string& name, const std::string& src_ref,
                    const std::string& tgt_ref) {
    ModuleDoc src = load_module_file(dir / src_ref);
    ModuleDoc tgt = load_module_file(dir / tgt_ref);
    MorphismDoc doc;
    doc.source_ref = src_ref;
    doc.target_ref = tgt_ref;
    doc.morphism = h0_induced_morphism(src.graph, tgt.graph, src.module, tgt.module);
    doc.source = std::move(src);
    doc.target = std::move(tgt);
    write_file(dir / name, serialize_morphism_doc(doc));
    std::cout << "wrote " << (dir / name).string() << "\n";
}

void write_raw_copy(const fs::path& dir, const std::string& graph_name, const std::string& raw_name) {
    ModuleDoc src = load_module_file(dir / graph_name);
    ModuleDoc raw;
    raw.form = ModuleDoc::Form::Raw;
    raw.module = src.module;
    raw.measure = src.measure;
    write_file(dir / raw_name, serialize_module_doc(raw));
    std::cout << "wrote " << (dir / raw_name).string() << "\n";
}

// The complement summand of the second example: the class of the late vertex
// (born at (1,2)), alive until the merging edge at (3,4) arrives.
void write_b_summand(const fs::path& dir) {
    ModuleDoc x1 = load_module_file(dir / "x1.pmod");
    const PosetPtr& poset = x1.measure.poset;
    auto in_region = [&](int p) {
        Rat x = poset->xs[poset->grid_ix(p)];
        Rat y = poset->ys[poset->grid_iy(p)];
        bool born = x >= 1 && y >= 2;
        bool merged = x >= 3 && y >= 4;
        return born && !merged;
    };
    std::vector<int> dims(poset->point_count(), 0);
    for (int p = 0; p < poset->point_count(); ++p) dims[p] = in_region(p) ? 1 : 0;
    std::vector<Mat> arrows;
    for (int k = 0; k < poset->arrow_count(); ++k) {
        Arrow a = poset->arrow(k);
        Mat m(dims[a.tgt], dims[a.src]);
        if (dims[a.src] == 1 && dims[a.tgt] == 1) m.at(0, 0) = Fp(1);
        arrows.push_back(std::move(m));
    }
    ModuleDoc b;
    b.form = ModuleDoc::Form::Raw;
    b.module = make_module(poset, std::move(dims), std::move(arrows));
    b.measure = x1.measure;
    write_file(dir / "b.pmod", serialize_module_doc(b));
    std::cout << "wrote " << (dir / "b.pmod").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_fixtures FIXTURE_DIR\n";
        return 2;
    }
    fs::path root = argv[1];
    try {
        fs::path tp1 = root / "twoparam1";
        write_morphism(tp1, "zx.pmorph", "z.pmod", "x.pmod");
        write_morphism(tp1, "zy.pmorph", "z.pmod", "y.pmod");
        write_morphism(tp1, "xw.pmorph", "x.pmod", "w.pmod");
        write_morphism(tp1, "yw.pmorph", "y.pmod", "w.pmod");
        write_raw_copy(tp1, "x.pmod", "xraw.pmod");
        write_raw_copy(tp1, "y.pmod", "yraw.pmod");
        write_raw_copy(tp1, "z.pmod", "zraw.pmod");
        write_raw_copy(tp1, "w.pmod", "wraw.pmod");

        for (const char* sub : {"t0", "thalf"}) {
            fs::path dir = root / "twoparam2" / sub;
            write_morphism(dir, "inc.pmorph", "x1.pmod", "xt.pmod");
            write_b_summand(dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
