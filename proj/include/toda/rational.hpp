#pragma once

#include <gmpxx.h>

#include <string>

#include "toda/errors.hpp"

namespace toda {

/*
 * Exact rational scalars.
 *
 * Rat is GMP's canonical rational: gcd(|num|, den) = 1, den > 0, and zero
 * is stored as 0/1.  All arithmetic re-canonicalizes, so those invariants
 * hold for every value that escapes this header.
 */
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw ArithmeticError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_from_string(const std::string& text) {
    Rat r;
    if (r.set_str(text, 10) != 0)
        throw ParseError("not a rational literal: '" + text + "'");
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline int sign(const Rat& r) { return sgn(r); }

/// gcd on ℚ: gcd(n1/d1, n2/d2) = gcd(n1,n2)/lcm(d1,d2), non-negative.
/// This is the content gcd used to normalize polynomial contents.
inline Rat rat_gcd(const Rat& x, const Rat& y) {
    if (x == 0) return abs(y);
    if (y == 0) return abs(x);
    Int n = gcd(x.get_num(), y.get_num());
    Int d = lcm(x.get_den(), y.get_den());
    return Rat(n, d);  // n >= 0, d > 0; already canonical up to gcd
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace toda
