#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gfodd/diagram.hpp"
#include "gfodd/relational.hpp"
#include "gfodd/sexpr.hpp"

namespace gfodd {

// Diagram text format:
//
//   (gfodd
//     (free (u truck))                      ; optional
//     (agg (max t truck) (avg s shop))
//     (if (empty s) (if (tin t s) 1/10 0) 1))
//
// The body may instead be a node table, used when subgraphs are shared:
//
//   (nodes (0 (empty s) 1 2) (1 (tin t s) 3 2) (2 0) (3 1/10))
//
// Internal rows are (id atom true-child false-child), leaf rows (id value).
// Symbols declared in free/agg are variables, everything else is a constant.

/// Parses a diagram. With strict set, labels must already be ordered.
Gfodd parse_diagram(std::string_view text, bool strict = true);
Gfodd diagram_from_sexpr(const SExpr& e, bool strict = true);

/// Diagram from a body (nested or node table) under the given variables.
Gfodd diagram_from_parts(const std::vector<Variable>& free, const Prefix& prefix, const SExpr& body, bool strict);

/// Body expression with the given variables in scope (name -> sort).
ExprPtr parse_body(const SExpr& e, const std::map<std::string, std::string>& vars);
Atom parse_atom(const SExpr& e, const std::map<std::string, std::string>& vars);
Prefix parse_prefix(const SExpr& agg);

/// Text form; nested when the DAG is a tree, node table otherwise.
std::string write_diagram(const Gfodd& f);
/// Body only (nested if tree-shaped, else a node table), one line per test.
std::string write_body(const Gfodd& f, int indent = 0);
std::string write_prefix(const Prefix& p);

/// Graphviz rendering; true edges solid and drawn first (left), false dashed.
std::string to_dot(const Gfodd& f, const std::string& graph_name = "gfodd");

// State format:
//   (state (objects (s1 shop) (s2 shop) (t1 truck) (d1 depot)) (empty s1) (tin t1 d1))

Interpretation parse_state(const SExpr& e, const std::shared_ptr<const Vocabulary>& vocab);
/// Parses a single (state ...) or a (states ...) list; states with identical
/// object lists share one universe.
std::vector<Interpretation> parse_states(std::string_view text, const std::shared_ptr<const Vocabulary>& vocab);
std::string write_state(const Interpretation& s);
std::string write_states(const std::vector<Interpretation>& states);

}  // namespace gfodd
