#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ck {

// Exact rational scalar used throughout the geometric models. All model
// arithmetic is exact; no floating point enters any predicate.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rat(BigInt(num), BigInt(den));
}

inline BigInt rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline BigInt rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

// Serialized form is "p/q" with q > 0 and gcd(p,q) = 1; "p" when q = 1.
inline std::string rat_to_string(const Rat& q) {
    std::string s = rat_num(q).str();
    if (rat_den(q) != 1) {
        s += "/";
        s += rat_den(q).str();
    }
    return s;
}

Rat rat_from_string(const std::string& text);

// floor(q) as a big integer.
inline BigInt rat_floor(const Rat& q) {
    BigInt n = rat_num(q), d = rat_den(q);
    BigInt f = n / d;
    if (n < 0 && f * d != n) --f;
    return f;
}

// Wraps q into [0,1); the fractional part.
inline Rat rat_mod1(const Rat& q) { return q - Rat(rat_floor(q)); }

// Nearest integer to q; ties round down (deterministic).
inline BigInt rat_round(const Rat& q) { return rat_floor(q + rat(1, 2)); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace ck
