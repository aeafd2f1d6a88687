#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gfodd {

/// Exact rational used for all leaf values, probabilities and discounts.
using Rational = mpq_class;

/// Parses "p", "p/q" or a finite decimal such as "0.4". Throws ArgumentError.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace gfodd
