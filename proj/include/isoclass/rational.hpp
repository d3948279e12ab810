#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace isoclass {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q". Throws InvalidInput on malformed text or q == 0.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is one.
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace isoclass
