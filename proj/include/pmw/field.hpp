#pragma once

#include <cstdint>
#include <stdexcept>

namespace pmw {

namespace detail {
inline std::uint64_t& field_prime_ref() {
    static std::uint64_t p = 31;
    return p;
}
}  // namespace detail

inline std::uint64_t field_prime() { return detail::field_prime_ref(); }

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Selects the active prime field. Call before building any matrices;
// values from different primes must not be mixed.
inline void set_field_prime(std::uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("field modulus must be prime");
    if (p >= (1ull << 31)) throw std::invalid_argument("field modulus too large");
    detail::field_prime_ref() = p;
}

// Scalar in GF(p) for the active prime p. Always reduced, never rounds.
struct Fp {
    std::uint32_t v = 0;

    Fp() = default;
    explicit Fp(std::int64_t x) {
        std::int64_t p = static_cast<std::int64_t>(field_prime());
        std::int64_t r = x % p;
        if (r < 0) r += p;
        v = static_cast<std::uint32_t>(r);
    }

    bool is_zero() const { return v == 0; }

    friend Fp operator+(Fp a, Fp b) {
        std::uint64_t s = static_cast<std::uint64_t>(a.v) + b.v;
        std::uint64_t p = field_prime();
        return from_raw(s >= p ? s - p : s);
    }
    friend Fp operator-(Fp a, Fp b) {
        std::uint64_t p = field_prime();
        return from_raw(a.v >= b.v ? a.v - b.v : a.v + p - b.v);
    }
    friend Fp operator*(Fp a, Fp b) {
        return from_raw(static_cast<std::uint64_t>(a.v) * b.v % field_prime());
    }
    friend Fp operator-(Fp a) { return Fp(0) - a; }
    Fp& operator+=(Fp o) { return *this = *this + o; }
    Fp& operator-=(Fp o) { return *this = *this - o; }
    Fp& operator*=(Fp o) { return *this = *this * o; }
    friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
    friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }

    Fp inv() const {
        if (v == 0) throw std::domain_error("inverse of zero");
        // extended Euclid
        std::int64_t p = static_cast<std::int64_t>(field_prime());
        std::int64_t a = v, b = p, x0 = 1, x1 = 0;
        while (b != 0) {
            std::int64_t q = a / b;
            std::int64_t t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        if (x0 < 0) x0 += p;
        return from_raw(static_cast<std::uint64_t>(x0));
    }

    static Fp from_raw(std::uint64_t r) {
        Fp f; f.v = static_cast<std::uint32_t>(r); return f;
    }
};

inline Fp operator/(Fp a, Fp b) { return a * b.inv(); }

}  // namespace pmw
