// Command-line interface: decompose, distance, match, cost, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 parse/validation error,
// 3 mode mismatch.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmw/io.hpp"
#include "pmw/matching.hpp"
#include "pmw/verify.hpp"
#include "pmw/wasserstein.hpp"

using namespace pmw;

namespace {

struct GlobalOpts {
    std::uint64_t field_prime = 31;
    std::string output = "pretty";
    std::uint64_t seed = 1;

    bool machine() const { return output == "machine"; }
};

PNorm parse_p(const std::string& s) {
    if (s == "inf" || s == "oo") return PNorm::inf();
    try {
        size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size() || v < 1) throw std::invalid_argument(s);
        return PNorm::finite(static_cast<unsigned>(v));
    } catch (const std::exception&) {
        throw ModeError("p must be a positive integer or 'inf'");
    }
}

std::string interval_str(const Interval& iv) {
    return "[" + rat_str(iv.poset->coords[iv.lo]) + ", " + rat_str(iv.poset->coords[iv.hi]) + "]";
}

void require_same_measure(const Measure& a, const Measure& b) {
    require_same_poset(a.poset, b.poset, "distance");
    if (a.w != b.w) throw ValidationError("the two files declare different measures");
}

void print_value(const GlobalOpts& g, const WassersteinResult& w) {
    if (w.p.is_inf) {
        if (g.machine())
            std::cout << "p inf\nvalue " << rat_str(w.value_pow) << "\n";
        else
            std::cout << "W_inf = " << rat_str(w.value_pow) << " (~" << w.value_pow.get_d() << ")\n";
    } else {
        if (g.machine())
            std::cout << "p " << w.p.p << "\nvalue_pow " << rat_str(w.value_pow) << "\napprox "
                      << approx_root(w.value_pow, w.p.p) << "\n";
        else
            std::cout << "W_" << w.p.p << "^" << w.p.p << " = " << rat_str(w.value_pow)
                      << "   (W_" << w.p.p << " ~ " << approx_root(w.value_pow, w.p.p) << ")\n";
    }
}

int cmd_decompose(const GlobalOpts& g, const std::string& file) {
    ModuleDoc doc = load_module_file(file);
    if (!doc.module->poset->is_linear())
        throw ModeError("decompose needs a linear poset (grid modules have no barcode here)");
    Barcode b = decompose(doc.module);
    if (!g.machine()) std::cout << "barcode (" << b.total_count() << " intervals)\n";
    for (const auto& [iv, mult] : b.items) {
        DiagramPoint dp = diagram_point(iv, doc.measure);
        if (g.machine())
            std::cout << "interval " << rat_str(iv.poset->coords[iv.lo]) << " "
                      << rat_str(iv.poset->coords[iv.hi]) << " " << mult << " " << rat_str(dp.birth.v)
                      << " " << rat_str(dp.death.v) << "\n";
        else
            std::cout << "  " << interval_str(iv) << " x" << mult << "  ->  (" << rat_str(dp.birth.v)
                      << ", " << rat_str(dp.death.v) << ")\n";
    }
    return 0;
}

void print_matching(const GlobalOpts& g, const WassersteinResult& w,
                    const std::vector<Interval>* a_ivs, const std::vector<Interval>* b_ivs) {
    auto show = [&](int idx, const std::vector<Interval>* ivs) {
        return ivs ? interval_str((*ivs)[idx]) : "#" + std::to_string(idx);
    };
    for (size_t k = 0; k < w.matched.size(); ++k) {
        auto [i, j] = w.matched[k];
        if (g.machine())
            std::cout << "match " << i << " " << j << " " << rat_str(w.pair_costs[k]) << "\n";
        else
            std::cout << "  " << show(i, a_ivs) << " <-> " << show(j, b_ivs) << "  cost "
                      << rat_str(w.pair_costs[k]) << "\n";
    }
    for (size_t k = 0; k < w.a_to_diag.size(); ++k) {
        if (g.machine())
            std::cout << "unmatched_a " << w.a_to_diag[k] << " " << rat_str(w.a_diag_costs[k]) << "\n";
        else
            std::cout << "  " << show(w.a_to_diag[k], a_ivs) << " -> 0  cost "
                      << rat_str(w.a_diag_costs[k]) << "\n";
    }
    for (size_t k = 0; k < w.b_to_diag.size(); ++k) {
        if (g.machine())
            std::cout << "unmatched_b " << w.b_to_diag[k] << " " << rat_str(w.b_diag_costs[k]) << "\n";
        else
            std::cout << "  0 -> " << show(w.b_to_diag[k], b_ivs) << "  cost "
                      << rat_str(w.b_diag_costs[k]) << "\n";
    }
}

int cmd_distance(const GlobalOpts& g, const std::string& pstr, const std::string& mode,
                 const std::vector<std::string>& hints, const std::string& fa,
                 const std::string& fb) {
    ModuleDoc da = load_module_file(fa);
    ModuleDoc db = load_module_file(fb);
    require_same_measure(da.measure, db.measure);

    if (mode == "diagram") {
        PNorm p = parse_p(pstr);
        if (!da.module->poset->is_linear()) throw ModeError("--diagram needs linear posets");
        std::vector<DiagramPoint> xa, xb;
        for (const Interval& iv : decompose(da.module).expanded())
            xa.push_back(diagram_point(iv, da.measure));
        for (const Interval& iv : decompose(db.module).expanded())
            xb.push_back(diagram_point(iv, db.measure));
        WassersteinResult w = wasserstein_diagrams(p, xa, xb);
        print_value(g, w);
        print_matching(g, w, nullptr, nullptr);
        return 0;
    }
    if (mode == "module") {
        PNorm p = parse_p(pstr);
        ModuleWasserstein w = wasserstein_modules(p, da.module, db.module, da.measure);
        print_value(g, w.result);
        print_matching(g, w.result, &w.a_intervals, &w.b_intervals);
        return 0;
    }
    if (mode == "bracket") {
        std::vector<Zigzag> hint_zz;
        for (const std::string& h : hints) hint_zz.push_back(load_zigzag_file(h).zigzag);
        Bracket br = d_mu_bracket(da.module, db.module, da.measure, hint_zz);
        std::string witness = br.upper_witness == -2 ? "matching"
                              : br.upper_witness < 0 ? "through-zero"
                                                     : "hint " + hints[br.upper_witness];
        if (g.machine())
            std::cout << "lower " << rat_str(br.lower) << "\nupper " << rat_str(br.upper)
                      << "\nexact " << (br.exact ? 1 : 0) << "\nupper_witness " << witness << "\n";
        else
            std::cout << "d_mu in [" << rat_str(br.lower) << ", " << rat_str(br.upper) << "]"
                      << (br.exact ? "  (exact)" : "") << "  upper bound from " << witness << "\n";
        return 0;
    }
    throw ModeError("distance mode is --diagram, --module or --bracket");
}

int cmd_match(const GlobalOpts& g, bool mono, const std::string& file) {
    MorphismDoc doc = load_morphism_file(file);
    const Morphism& f = doc.morphism;
    if (!f.src->poset->is_linear()) throw ModeError("match needs linear posets");
    if (mono && !is_mono(f)) throw ModeError("morphism is not a monomorphism");
    if (!mono && !is_epi(f)) throw ModeError("morphism is not an epimorphism");

    ModuleWithBasis src = decompose_with_basis(f.src);
    ModuleWithBasis tgt = decompose_with_basis(f.tgt);
    bool ordered = f.src->poset->ordered();
    AlgebraicMatching am = ordered ? (mono ? induced_matching_mono(f, src.basis, tgt.basis)
                                           : induced_matching_epi(f, src.basis, tgt.basis))
                                   : coefficient_matching(f, src.basis, tgt.basis, !mono);

    const Measure& mu = doc.source.measure;
    Rat pair_total(0);
    for (auto [s, t] : am.pairs) {
        Rat d = symmetric_difference_measure(am.src_basis.summands[s].iv,
                                             am.tgt_basis.summands[t].iv, mu);
        pair_total += d;
        if (g.machine())
            std::cout << "pair " << rat_str(mu.poset->coords[am.src_basis.summands[s].iv.lo]) << " "
                      << rat_str(mu.poset->coords[am.src_basis.summands[s].iv.hi]) << " "
                      << rat_str(mu.poset->coords[am.tgt_basis.summands[t].iv.lo]) << " "
                      << rat_str(mu.poset->coords[am.tgt_basis.summands[t].iv.hi]) << " "
                      << rat_str(d) << "\n";
        else
            std::cout << "  " << interval_str(am.src_basis.summands[s].iv) << " <-> "
                      << interval_str(am.tgt_basis.summands[t].iv) << "  d_mu " << rat_str(d) << "\n";
    }
    for (int s : am.unmatched_src) {
        Rat d = measure_of(am.src_basis.summands[s].iv, mu);
        pair_total += d;
        if (g.machine())
            std::cout << "unmatched_src " << rat_str(mu.poset->coords[am.src_basis.summands[s].iv.lo])
                      << " " << rat_str(mu.poset->coords[am.src_basis.summands[s].iv.hi]) << " "
                      << rat_str(d) << "\n";
        else
            std::cout << "  " << interval_str(am.src_basis.summands[s].iv) << " -> 0  d_mu "
                      << rat_str(d) << "\n";
    }
    for (int t : am.unmatched_tgt) {
        Rat d = measure_of(am.tgt_basis.summands[t].iv, mu);
        pair_total += d;
        if (g.machine())
            std::cout << "unmatched_tgt " << rat_str(mu.poset->coords[am.tgt_basis.summands[t].iv.lo])
                      << " " << rat_str(mu.poset->coords[am.tgt_basis.summands[t].iv.hi]) << " "
                      << rat_str(d) << "\n";
        else
            std::cout << "  0 -> " << interval_str(am.tgt_basis.summands[t].iv) << "  d_mu "
                      << rat_str(d) << "\n";
    }

    // final interval coordinates; entries eliminated by the change of basis
    // show up as absent lines here
    for (size_t t = 0; t < am.coeffs.tgt_intervals.size(); ++t)
        for (size_t s = 0; s < am.coeffs.src_intervals.size(); ++s) {
            Fp v = am.coeffs.at(static_cast<int>(t), static_cast<int>(s));
            if (v.is_zero()) continue;
            if (g.machine())
                std::cout << "coeff " << rat_str(mu.poset->coords[am.coeffs.src_intervals[s].lo])
                          << " " << rat_str(mu.poset->coords[am.coeffs.src_intervals[s].hi]) << " "
                          << rat_str(mu.poset->coords[am.coeffs.tgt_intervals[t].lo]) << " "
                          << rat_str(mu.poset->coords[am.coeffs.tgt_intervals[t].hi]) << " " << v.v
                          << "\n";
            else
                std::cout << "  f: " << interval_str(am.coeffs.src_intervals[s]) << " -> "
                          << interval_str(am.coeffs.tgt_intervals[t]) << "  scalar " << v.v << "\n";
        }

    auto [ker, coker] = ker_coker_dims(f);
    Rat kw = integral(ker, mu), cw = integral(coker, mu);
    Rat reference = mono ? cw : kw;
    std::string id_status = !ordered ? "n/a" : (pair_total == reference ? "holds" : "differs");
    if (g.machine()) {
        std::cout << "total_pair_cost " << rat_str(pair_total) << "\n";
        std::cout << "kernel_weight " << rat_str(kw) << "\n";
        std::cout << "cokernel_weight " << rat_str(cw) << "\n";
        std::cout << "identity_check " << id_status << "\n";
    } else {
        std::cout << "total matched cost " << rat_str(pair_total) << "\n";
        std::cout << "kernel weight " << rat_str(kw) << ", cokernel weight " << rat_str(cw) << "\n";
        std::cout << "sum of pair distances vs " << (mono ? "cokernel" : "kernel")
                  << " weight: " << id_status << "\n";
    }
    return 0;
}

int cmd_cost(const GlobalOpts& g, const std::string& file) {
    ZigzagDoc doc = load_zigzag_file(file);
    for (const MorphismDoc& step : doc.step_docs) require_same_measure(doc.measure, step.source.measure);
    Rat c = zigzag_cost(doc.zigzag, doc.measure);
    if (g.machine())
        std::cout << "cost " << rat_str(c) << "\n";
    else
        std::cout << "cost_mu = " << rat_str(c) << " over " << doc.zigzag.length() << " steps\n";
    return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& suite, int trials) {
    SuiteResult res;
    if (suite == "isometry")
        res = verify_isometry(g.seed, trials);
    else if (suite == "axioms")
        res = verify_axioms(g.seed, trials);
    else if (suite == "bounds")
        res = verify_bounds(g.seed, trials);
    else
        throw ModeError("suite is isometry, axioms or bounds");
    if (g.machine()) {
        std::cout << "suite " << res.name << "\ntrials " << res.trials << "\nfailures "
                  << res.failures << "\n";
        if (!res.ok()) std::cout << "counterexample " << res.first_counterexample << "\n";
    } else {
        std::cout << res.name << ": " << res.trials << " trials, " << res.failures << " failures\n";
        if (!res.ok()) std::cout << "first counterexample: " << res.first_counterexample << "\n";
    }
    return res.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Wasserstein distances for persistence modules"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--field-prime", g.field_prime, "prime for the coefficient field")
        ->default_val(31);
    app.add_option("--output", g.output, "pretty or machine")
        ->check(CLI::IsMember({"pretty", "machine"}))
        ->default_val("pretty");
    app.add_option("--seed", g.seed, "seed for randomized commands")->default_val(1);

    auto* dec = app.add_subcommand("decompose", "interval decomposition of a module file");
    std::string dec_file;
    dec->add_option("file", dec_file, "module file")->required();

    auto* dist = app.add_subcommand("distance", "distances between two module files");
    std::string dist_p = "1", dist_a, dist_b;
    bool mode_diagram = false, mode_module = false, mode_bracket = false;
    std::vector<std::string> dist_hints;
    dist->add_option("-p", dist_p, "1, 2, 3, ... or inf")->default_val("1");
    dist->add_flag("--diagram", mode_diagram, "p-Wasserstein between persistence diagrams");
    dist->add_flag("--module", mode_module, "p-Wasserstein between modules");
    dist->add_flag("--bracket", mode_bracket, "lower/upper bracket for the zigzag distance");
    dist->add_option("--hint", dist_hints, "zigzag file sharpening the bracket upper bound");
    dist->add_option("fileA", dist_a)->required();
    dist->add_option("fileB", dist_b)->required();

    auto* match = app.add_subcommand("match", "induced algebraic matching of a morphism file");
    std::string match_file;
    bool match_mono = false, match_epi = false;
    match->add_flag("--mono", match_mono, "treat as a monomorphism");
    match->add_flag("--epi", match_epi, "treat as an epimorphism");
    match->add_option("file", match_file)->required();

    auto* cost = app.add_subcommand("cost", "cost of a zigzag file");
    std::string cost_file;
    cost->add_option("file", cost_file)->required();

    auto* verify = app.add_subcommand("verify", "randomized property suites");
    std::string verify_suite;
    int verify_trials = 200;
    verify->add_option("suite", verify_suite, "isometry, axioms or bounds")->required();
    verify->add_option("--trials", verify_trials, "number of trials")->default_val(200);

    CLI11_PARSE(app, argc, argv);

    try {
        set_field_prime(g.field_prime);
        if (dec->parsed()) return cmd_decompose(g, dec_file);
        if (dist->parsed()) {
            int modes = int(mode_diagram) + int(mode_module) + int(mode_bracket);
            if (modes != 1) throw ModeError("pick exactly one of --diagram, --module, --bracket");
            std::string mode = mode_diagram ? "diagram" : mode_module ? "module" : "bracket";
            return cmd_distance(g, dist_p, mode, dist_hints, dist_a, dist_b);
        }
        if (match->parsed()) {
            if (int(match_mono) + int(match_epi) != 1)
                throw ModeError("pick exactly one of --mono, --epi");
            return cmd_match(g, match_mono, match_file);
        }
        if (cost->parsed()) return cmd_cost(g, cost_file);
        if (verify->parsed()) return cmd_verify(g, verify_suite, verify_trials);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ModeError& e) {
        std::cerr << "mode mismatch: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
