#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace oscint {

/// Exact arbitrary-precision rational. Always kept canonical.
using Rational = mpq_class;

/// Parses "3", "-3/7", "0.25", "1.5e-3" into an exact rational.
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical string form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

inline int sign(const Rational& q) { return sgn(q); }

/// num/den in canonical form. Throws DomainError on den == 0.
Rational frac(long num, long den);

/// q^e for integer e >= 0.
Rational pow(const Rational& q, unsigned e);

}  // namespace oscint
