#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gfodd/rational.hpp"
#include "gfodd/relational.hpp"

namespace gfodd {

enum class Aggregator : std::uint8_t { Max, Avg };

const char* to_string(Aggregator a);

struct PrefixEntry {
  Variable var;
  Aggregator agg = Aggregator::Max;
  friend bool operator==(const PrefixEntry&, const PrefixEntry&) = default;
};

using Prefix = std::vector<PrefixEntry>;
using NodeId = std::uint32_t;

struct Node {
  bool is_leaf = true;
  Atom atom;                   // internal nodes only
  NodeId true_child = 0;       // internal nodes only
  NodeId false_child = 0;      // internal nodes only
  Rational value;              // leaves only

  friend bool operator==(const Node&, const Node&) = default;
};

/// An edge: parent node plus branch. Ordered by node id, then f before t.
struct EdgeId {
  NodeId node = 0;
  bool branch = false;  // true branch?

  std::uint32_t code() const { return node * 2u + (branch ? 1u : 0u); }
  static EdgeId from_code(std::uint32_t c) { return {c / 2u, (c % 2u) == 1u}; }
  friend auto operator<=>(const EdgeId& a, const EdgeId& b) { return a.code() <=> b.code(); }
  friend bool operator==(const EdgeId&, const EdgeId&) = default;
};

std::string to_string(const EdgeId& e);

/// Set of edges compared lexicographically as sorted edge sequences.
class EdgeSet {
 public:
  EdgeSet() = default;
  EdgeSet(std::initializer_list<EdgeId> edges);

  void insert(EdgeId e);
  void insert_all(const EdgeSet& other);
  bool contains(EdgeId e) const;
  bool empty() const { return codes_.empty(); }
  std::size_t size() const { return codes_.size(); }
  std::vector<EdgeId> edges() const;
  const std::vector<std::uint32_t>& codes() const { return codes_; }

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
  /// Lexicographic order over the sorted sequences ("1f3t3f" < "1t2f3t3f").
  friend bool operator<(const EdgeSet& a, const EdgeSet& b) { return a.codes_ < b.codes_; }

 private:
  std::vector<std::uint32_t> codes_;  // sorted, unique
};

std::string to_string(const EdgeSet& s);

/// A generalized first-order decision diagram: aggregation prefix plus an
/// ordered DAG. Node 0 is the root; internal nodes are numbered
/// topologically and precede all leaves. Open expressions (truth value and
/// probability diagrams) list their unaggregated variables in free_vars.
class Gfodd {
 public:
  Gfodd();  // the constant-0 diagram

  const std::vector<Variable>& free_vars() const { return free_; }
  const Prefix& prefix() const { return prefix_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  NodeId root() const { return 0; }
  bool is_constant() const { return nodes_.front().is_leaf; }

  std::size_t size() const { return nodes_.size(); }
  std::size_t internal_count() const;

  /// Index of a prefix variable, or -1.
  int prefix_index(const std::string& var_name) const;
  /// Variables occurring in at least one atom.
  std::set<std::string> used_variables() const;
  /// Every (free and prefix) variable, free ones first.
  std::vector<Variable> order_variables() const;
  std::set<Term> constants() const;

  friend bool operator==(const Gfodd&, const Gfodd&) = default;

 private:
  friend class DiagramBuilder;
  std::vector<Variable> free_;
  Prefix prefix_;
  std::vector<Node> nodes_;
};

/// Nested if/leaf expression used to build diagrams.
struct Expr {
  bool is_leaf = true;
  Rational value;
  Atom atom;
  std::shared_ptr<const Expr> then_branch;
  std::shared_ptr<const Expr> else_branch;

  static std::shared_ptr<const Expr> leaf(Rational v);
  static std::shared_ptr<const Expr> ite(Atom a, std::shared_ptr<const Expr> t, std::shared_ptr<const Expr> e);
};
using ExprPtr = std::shared_ptr<const Expr>;

/// Variable order used to compare atoms: free variables then the prefix.
class OrderContext {
 public:
  explicit OrderContext(const std::vector<Variable>& order);
  OrderContext(const std::vector<Variable>& free, const Prefix& prefix);

  /// Index of a variable in the order; throws ConstructionError if unknown.
  int index(const std::string& var) const;
  bool contains(const std::string& var) const { return index_.count(var) != 0; }

 private:
  std::map<std::string, int> index_;
};

/// Total order over node labels: equality atoms first, then predicate name,
/// then argument tuples where constants (by name) precede variables (by
/// position in the order context). Equality atoms are compared with their
/// arguments in canonical orientation.
std::strong_ordering atom_order(const Atom& a, const Atom& b, const OrderContext& ctx);

/// Builds a diagram from an expression whose labels already respect
/// atom_order along every path. Identical sub-expressions share a node.
/// Throws ConstructionError on an order violation, ValueError on a negative
/// leaf, ConstructionError when an atom uses an undeclared variable.
Gfodd build(const Prefix& prefix, const ExprPtr& expr, const std::vector<Variable>& free = {});

/// Like build but accepts labels in any order; the result is re-sorted.
Gfodd build_sorted(const Prefix& prefix, const ExprPtr& expr, const std::vector<Variable>& free = {});

/// Merges isomorphic subgraphs, removes redundant tests and drops prefix
/// variables that occur in no atom.
Gfodd normalize(const Gfodd& f);

/// True when labels strictly increase along every root-to-leaf path.
bool is_ordered(const Gfodd& f);

/// Renames g's prefix variables so that they are disjoint from f's variables.
std::pair<Gfodd, Gfodd> standardize_apart(const Gfodd& f, const Gfodd& g);

/// Replaces prefix variable `var` by constant `c` and drops it from the prefix.
Gfodd bind_variable(const Gfodd& f, const std::string& var, const Term& c);

/// Replaces constant `c` by the fresh variable `v` aggregated with `agg` at
/// prefix position `position` (0 = head, prefix size = tail).
Gfodd lift_constant(const Gfodd& f, const Term& c, const Variable& v, Aggregator agg, std::size_t position);

/// General rewrite: maps terms through `renaming` and re-sorts into the
/// given free list and prefix. Variables not renamed must appear in the new
/// order. Unused prefix variables are kept unless `prune` is set.
Gfodd rebuild(const Gfodd& f, const std::map<Term, Term>& renaming, const std::vector<Variable>& free,
              const Prefix& prefix, bool prune = false);

/// Name not contained in `used`, derived from `base` by appending a counter.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

/// Diagram names (variables and constants) in use.
std::set<std::string> used_names(const Gfodd& f);

}  // namespace gfodd
