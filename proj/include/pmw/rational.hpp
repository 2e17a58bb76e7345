#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace pmw {

// Exact rational scalar used for measures, weights and costs.
// mpq_class keeps values canonical (lowest terms, positive denominator).
using Rat = mpq_class;

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// The two-argument mpq_class constructor does not reduce; route any ratio
// that may not be in lowest terms through here.
inline Rat make_rat(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat_pow(const Rat& q, unsigned e) {
    Rat r(1);
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
    r.canonicalize();
    return r;
}

// Parses "n", "-n" or "n/d". Throws std::invalid_argument on malformed input.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Decimal approximation of q^(1/p), for display only.
inline double approx_root(const Rat& q, unsigned p) {
    double v = q.get_d();
    if (p == 1) return v;
    return v <= 0 ? 0.0 : std::pow(v, 1.0 / static_cast<double>(p));
}

}  // namespace pmw
