#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gfodd {

/// Minimal s-expression tree. ';' starts a comment running to end of line.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 1;
  int column = 1;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  /// True for a list whose first item is the atom `head`.
  bool has_head(std::string_view head) const { return is_list && !items.empty() && items[0].is_atom(head); }
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items.at(i); }
};

/// Parses all top-level expressions. Throws ParseError with line/column.
std::vector<SExpr> parse_sexprs(std::string_view text);
/// Parses exactly one top-level expression.
SExpr parse_sexpr(std::string_view text);

std::string to_string(const SExpr& e);

/// ParseError positioned at `e`.
[[noreturn]] void parse_fail(const SExpr& e, const std::string& message);

/// Atom text of `e`, failing with `what` if `e` is a list.
const std::string& expect_atom(const SExpr& e, const char* what);

}  // namespace gfodd
