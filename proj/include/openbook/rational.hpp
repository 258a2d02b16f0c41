#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "openbook/errors.hpp"

namespace openbook {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Floor division toward -inf; cpp_int '/' truncates toward zero.
inline Int rfloor(const Rat& r) {
    Int n = num(r), d = den(r); // d > 0 canonical
    Int q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

// Canonical representative in [0,1).
inline Rat mod1(const Rat& r) { return r - Rat(rfloor(r)); }

// "p" for integers, "p/q" otherwise; q > 0, gcd-reduced (cpp_rational invariant).
inline std::string rat_str(const Rat& r) {
    if (den(r) == 1) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

// Accepts optional sign, "p" or "p/q" with q > 0 after sign normalization.
inline Rat parse_rat(const std::string& s, std::size_t line = 0) {
    std::size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    auto digits = [&](Int& out) {
        std::size_t start = i;
        out = 0;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
            out = out * 10 + (s[i] - '0');
            ++i;
        }
        return i > start;
    };
    Int p, q = 1;
    if (!digits(p)) throw ParseError("bad rational '" + s + "'", line);
    if (i < s.size() && s[i] == '/') {
        ++i;
        if (!digits(q) || q == 0) throw ParseError("bad rational '" + s + "'", line);
    }
    if (i != s.size()) throw ParseError("bad rational '" + s + "'", line);
    Rat r(p, q);
    return neg ? Rat(-r) : r;
}

// Simplest rational (minimal denominator; ties broken by the Stern-Brocot
// walk, hence deterministic) strictly inside the open interval (lo, hi).
inline Rat simplest_in(const Rat& lo, const Rat& hi) {
    if (!(lo < hi)) throw PreconditionError("EmptyInterval", "simplest_in needs lo < hi");
    if (lo < 0 && 0 < hi) return Rat(0);
    if (hi <= 0) return -simplest_in(-hi, -lo);
    // 0 <= lo < hi
    Int fl = rfloor(lo);
    if (Rat(fl + 1) < hi) return Rat(fl + 1);
    Rat a = lo - Rat(fl), b = hi - Rat(fl); // 0 <= a < b <= 1, no integer inside
    if (a == 0) {
        // interval (0, b): simplest is 1/(floor(1/b)+1)
        return Rat(fl) + Rat(Int(1), rfloor(Rat(1) / b) + 1);
    }
    return Rat(fl) + Rat(1) / simplest_in(Rat(1) / b, Rat(1) / a);
}

// Deterministic 64-bit generator (fixed across platforms, unlike
// std::uniform_int_distribution). splitmix-seeded xorshift-style mixing on
// top of std::mt19937_64 is avoided; we just use mt19937_64 raw draws with
// rejection for bounded sampling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        // xorshift64* : deterministic, simple, adequate for test-data generation
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1Dull;
    }

    // uniform in [0, n), n >= 1, via rejection
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next();
        while (v >= lim) v = next();
        return v % n;
    }

    int range(int lo, int hi) { // inclusive ends
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

} // namespace openbook
