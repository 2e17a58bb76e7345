#pragma once

#include <sstream>
#include <string>

#include "pmw/generators.hpp"
#include "pmw/wasserstein.hpp"

namespace pmw {

// Exact check of sqrt(c) <= sqrt(a) + sqrt(b) for nonnegative rationals.
inline bool sqrt_triangle_leq(const Rat& a, const Rat& b, const Rat& c) {
    if (c <= a + b) return true;
    return rat_pow(c - a - b, 2) <= Rat(4) * a * b;
}

struct SuiteResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string first_counterexample;

    bool ok() const { return failures == 0; }

    void fail(int trial, const std::string& what) {
        ++failures;
        if (first_counterexample.empty()) {
            std::ostringstream os;
            os << "trial " << trial << ": " << what;
            first_counterexample = os.str();
        }
    }
};

namespace detail {

struct IsometryEnsemble {
    PosetPtr poset;
    Measure mu;

    IsometryEnsemble()
        : poset(Poset::ordered_linear(integer_coords(21))), mu(counting_measure(poset)) {}

    std::pair<ModuleWithBasis, ModuleWithBasis> draw(Rng& rng, int max_intervals = 8) const {
        return {module_from_barcode(random_barcode(rng, poset, max_intervals)),
                module_from_barcode(random_barcode(rng, poset, max_intervals))};
    }

    std::vector<DiagramPoint> diagram(const ModulePtr& m) const {
        std::vector<DiagramPoint> d;
        for (const Interval& iv : decompose(m).expanded()) d.push_back(diagram_point(iv, mu));
        return d;
    }
};

}  // namespace detail

// W_p of modules equals W_p of their diagrams, exactly, and the W1 witness
// zigzag achieves the W1 value.
inline SuiteResult verify_isometry(std::uint64_t seed, int trials) {
    SuiteResult res;
    res.name = "isometry";
    detail::IsometryEnsemble e;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng(seed).fork(t);
        auto [m, n] = e.draw(rng);
        auto dm = e.diagram(m.module);
        auto dn = e.diagram(n.module);
        ++res.trials;
        for (unsigned p = 1; p <= 3; ++p) {
            Rat mod_pow = wasserstein_modules(PNorm::finite(p), m.module, n.module, e.mu).result.value_pow;
            Rat dgm_pow = wasserstein_diagrams(PNorm::finite(p), dm, dn).value_pow;
            if (mod_pow != dgm_pow)
                res.fail(t, "p=" + std::to_string(p) + " module power " + rat_str(mod_pow) +
                                " != diagram power " + rat_str(dgm_pow));
        }
        Rat mod_inf = wasserstein_modules(PNorm::inf(), m.module, n.module, e.mu).result.value_pow;
        Rat dgm_inf = wasserstein_diagrams(PNorm::inf(), dm, dn).value_pow;
        if (mod_inf != dgm_inf)
            res.fail(t, "p=inf module " + rat_str(mod_inf) + " != diagram " + rat_str(dgm_inf));

        ExactDistance ed = d_mu_exact_decomposable(m.module, n.module, e.mu);
        if (zigzag_cost(ed.witness, e.mu) != ed.value)
            res.fail(t, "witness zigzag cost " + rat_str(zigzag_cost(ed.witness, e.mu)) +
                            " != W1 " + rat_str(ed.value));
    }
    return res;
}

// Metric axioms for W_p on decomposable modules and p-subadditivity.
inline SuiteResult verify_axioms(std::uint64_t seed, int trials) {
    SuiteResult res;
    res.name = "axioms";
    detail::IsometryEnsemble e;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng(seed).fork(0x1000 + t);
        auto [m, n] = e.draw(rng, 5);
        ModuleWithBasis q = module_from_barcode(random_barcode(rng, e.poset, 5));
        ++res.trials;

        for (unsigned p : {1u, 2u}) {
            PNorm pn = PNorm::finite(p);
            Rat mn = wasserstein_modules(pn, m.module, n.module, e.mu).result.value_pow;
            Rat nm = wasserstein_modules(pn, n.module, m.module, e.mu).result.value_pow;
            Rat mm = wasserstein_modules(pn, m.module, m.module, e.mu).result.value_pow;
            Rat nq = wasserstein_modules(pn, n.module, q.module, e.mu).result.value_pow;
            Rat mq = wasserstein_modules(pn, m.module, q.module, e.mu).result.value_pow;
            if (mn != nm) res.fail(t, "symmetry fails at p=" + std::to_string(p));
            if (mm != 0) res.fail(t, "self distance nonzero at p=" + std::to_string(p));
            bool tri = p == 1 ? (mq <= mn + nq) : sqrt_triangle_leq(mn, nq, mq);
            if (!tri) res.fail(t, "triangle fails at p=" + std::to_string(p));
        }
        {
            PNorm pn = PNorm::inf();
            Rat mn = wasserstein_modules(pn, m.module, n.module, e.mu).result.value_pow;
            Rat nm = wasserstein_modules(pn, n.module, m.module, e.mu).result.value_pow;
            Rat mm = wasserstein_modules(pn, m.module, m.module, e.mu).result.value_pow;
            Rat nq = wasserstein_modules(pn, n.module, q.module, e.mu).result.value_pow;
            Rat mq = wasserstein_modules(pn, m.module, q.module, e.mu).result.value_pow;
            if (mn != nm) res.fail(t, "symmetry fails at p=inf");
            if (mm != 0) res.fail(t, "self distance nonzero at p=inf");
            if (!(mq <= mn + nq)) res.fail(t, "triangle fails at p=inf");
        }

        // p-subadditivity on random quadruples
        auto [m2, n2] = e.draw(rng, 5);
        ModulePtr msum = direct_sum({m.module, m2.module}).total;
        ModulePtr nsum = direct_sum({n.module, n2.module}).total;
        for (unsigned p : {1u, 2u}) {
            PNorm pn = PNorm::finite(p);
            Rat lhs = wasserstein_modules(pn, msum, nsum, e.mu).result.value_pow;
            Rat rhs = wasserstein_modules(pn, m.module, n.module, e.mu).result.value_pow +
                      wasserstein_modules(pn, m2.module, n2.module, e.mu).result.value_pow;
            if (!(lhs <= rhs)) res.fail(t, "p-subadditivity fails at p=" + std::to_string(p));
        }
        {
            PNorm pn = PNorm::inf();
            Rat lhs = wasserstein_modules(pn, msum, nsum, e.mu).result.value_pow;
            Rat rhs = std::max(wasserstein_modules(pn, m.module, n.module, e.mu).result.value_pow,
                               wasserstein_modules(pn, m2.module, n2.module, e.mu).result.value_pow);
            if (!(lhs <= rhs)) res.fail(t, "max-subadditivity fails at p=inf");
        }
    }
    return res;
}

// Hilbert bounds, zigzag costs against W1, norm-ordering forms, and the
// interval distance against its brute-force oracle on random orientations.
inline SuiteResult verify_bounds(std::uint64_t seed, int trials) {
    SuiteResult res;
    res.name = "bounds";
    detail::IsometryEnsemble e;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng(seed).fork(0x2000 + t);
        ++res.trials;

        auto [m, n] = e.draw(rng, 5);
        Rat w1 = wasserstein_modules(PNorm::finite(1), m.module, n.module, e.mu).result.value_pow;
        Zigzag z = random_zigzag_between(rng, m, n, 3, 5);
        Rat zc = zigzag_cost(z, e.mu);
        if (!(zc >= hilbert_bounds(*m.module, *n.module, e.mu).first))
            res.fail(t, "zigzag cost beats the Hilbert lower bound");
        if (!(zc >= w1)) res.fail(t, "zigzag cost " + rat_str(zc) + " beats W1 " + rat_str(w1));

        // norm ordering at the power level
        Rat winf = wasserstein_modules(PNorm::inf(), m.module, n.module, e.mu).result.value_pow;
        for (unsigned p : {1u, 2u, 3u}) {
            Rat wp = wasserstein_modules(PNorm::finite(p), m.module, n.module, e.mu).result.value_pow;
            if (!(rat_pow(winf, p) <= wp)) res.fail(t, "W_inf exceeds W_p at p=" + std::to_string(p));
            if (!(wp <= rat_pow(w1, p))) res.fail(t, "W_p exceeds W_1 at p=" + std::to_string(p));
        }

        // interval distance oracle on a random orientation
        int np = 3 + rng.below(4);
        auto poset = Poset::linear(integer_coords(np), random_orients(rng, np));
        Measure cm = counting_measure(poset);
        Interval a = random_interval(rng, poset);
        Interval b = random_interval(rng, poset);
        Rat sym = symmetric_difference_measure(a, b, cm);
        if (d_interval(a, b, cm) != sym) res.fail(t, "interval distance differs from the oracle");
        Zigzag w = interval_witness_zigzag(a, b);
        if (zigzag_cost(w, cm) != sym) res.fail(t, "interval witness zigzag misses the value");
        if (hilbert_bounds(*interval_module(a), *interval_module(b), cm).first != sym)
            res.fail(t, "interval Hilbert bound is not tight");
    }
    return res;
}

}  // namespace pmw
