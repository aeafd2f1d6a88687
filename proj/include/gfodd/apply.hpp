#pragma once

#include <optional>
#include <string>

#include "gfodd/detail/builder.hpp"
#include "gfodd/diagram.hpp"

namespace gfodd {

/// Pointwise combination of the DAG parts. Variables with the same name are
/// shared; the result prefix is f's prefix followed by g's remaining
/// variables (likewise for free variables). The result is normalized.
Gfodd apply_open(ApplyOp op, const Gfodd& f, const Gfodd& g);

/// Every leaf multiplied by c (c >= 0).
Gfodd scale(const Gfodd& f, const Rational& c);

/// Prefix is zero or more MAX variables followed by exactly one AVG variable.
bool is_a4(const Prefix& p);
inline bool is_a4(const Gfodd& f) { return is_a4(f.prefix()); }

/// f unchanged when already of the max* avg form. Without an AVG variable a
/// dummy one of `avg_sort` is appended. Other shapes throw FormError.
Gfodd as_a4(const Gfodd& f, const std::string& avg_sort);

/// max_x max_x' avg_y (F + G): MAX parts renamed apart, AVG variable shared.
Gfodd add_shared_avg(const Gfodd& f, const Gfodd& g);

/// max over two max* avg diagrams, through
///   max_{z1,z2} max_x avg_y (if z1 = z2 then F else G)
/// with g's MAX variables matched positionally (per sort) to f's. Correct on
/// interpretations with at least two objects of `z_sort`, which defaults to
/// the sort of f's AVG variable.
Gfodd max_expr(const Gfodd& f, const Gfodd& g, std::optional<std::string> z_sort = std::nullopt);

}  // namespace gfodd
