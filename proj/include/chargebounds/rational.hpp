#pragma once

#include <gmpxx.h>

#include <string>

namespace chargebounds {

// Exact arithmetic throughout: arbitrary-precision rationals in canonical
// form (reduced, positive denominator) and big integers for counting.
using Rational = mpq_class;
using BigInt = mpz_class;

// Serializes as "num/den", denominator always present ("3" -> "3/1").
inline std::string rational_to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Parses "num/den" or a bare integer. Returns false on malformed input.
bool rational_from_string(const std::string& text, Rational& out);

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

} // namespace chargebounds
