#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gfodd/diagram.hpp"
#include "gfodd/relational.hpp"

namespace gfodd {

struct EvalResult {
  Rational value;
  /// Binding of the leading MAX variables of the winning block.
  Substitution winner;
  /// Edges marked by the winning block.
  EdgeSet edges;
  /// Work counter: substitutions enumerated (brute force) or table rows
  /// materialized (variable elimination).
  std::uint64_t work = 0;

  friend bool same_outcome(const EvalResult& a, const EvalResult& b) {
    return a.value == b.value && a.winner == b.winner && a.edges == b.edges;
  }
};

/// Full enumeration of substitutions, aggregating x_n first. MAX ties are
/// broken by the lexicographically smaller edge set, then the earlier object.
EvalResult eval_brute(const Gfodd& f, const Interpretation& I);

// ---------------------------------------------------------------------------
// Variable elimination

/// Interned values, edge sets and winner tuples. Table entries refer to them
/// by id, so rows are copied without allocating. Equal items share an id.
class EvalPool {
 public:
  using Id = std::uint32_t;

  EvalPool();

  Id value(const Rational& v);
  Id edges(const EdgeSet& e);
  Id winner(const std::vector<int>& w);

  const Rational& value_of(Id id) const { return values_[id]; }
  const EdgeSet& edges_of(Id id) const { return edge_sets_[id]; }
  const std::vector<int>& winner_of(Id id) const { return winners_[id]; }

  Id add_edge(Id edges, EdgeId e);
  Id unite_edges(Id a, Id b);
  /// Tuple with position `var` set to `pos` (unchanged when var is beyond it).
  Id set_winner(Id w, int var, int pos);

 private:
  struct Hash {
    std::size_t operator()(const Rational& r) const noexcept;
    std::size_t operator()(const EdgeSet& e) const noexcept;
    std::size_t operator()(const std::vector<int>& w) const noexcept;
  };
  std::deque<Rational> values_;
  std::deque<EdgeSet> edge_sets_;
  std::deque<std::vector<int>> winners_;
  std::unordered_map<Rational, Id, Hash> value_ids_;
  std::unordered_map<EdgeSet, Id, Hash> edge_ids_;
  std::unordered_map<std::vector<int>, Id, Hash> winner_ids_;
  std::unordered_map<std::uint64_t, Id> add_edge_memo_;
  std::unordered_map<std::uint64_t, Id> unite_memo_;
  std::unordered_map<std::uint64_t, Id> winner_memo_;
};

struct EvalEntry {
  bool present = false;
  EvalPool::Id value = 0;
  EvalPool::Id edges = 0;
  /// Domain positions chosen for aggregated leading MAX variables (-1 = none).
  EvalPool::Id winner = 0;
};

/// Dense table over explicit columns (prefix positions, ascending); the first
/// column varies slowest. Columns not listed are implicit: the table does not
/// depend on them.
struct EvalTable {
  std::vector<int> columns;
  std::vector<std::size_t> extent;
  std::vector<EvalEntry> entries;

  std::size_t index_of(std::span<const int> positions) const;
  bool has_column(int var) const;
};

/// Aggregates prefix variable `var` (domain size `domain`) out of t. MAX keeps
/// the best row: larger value, then smaller edge set, then smaller binding of
/// the leading MAX variables compared in prefix order. Throws InternalError
/// when an AVG group is incomplete.
EvalTable aggregate_out(EvalPool& pool, const EvalTable& t, int var, std::size_t domain, Aggregator agg);

struct NodeVarStats {
  std::vector<int> above;  // variables on some path above the node
  std::vector<int> self;   // variables of the node's own atom
  int maxabove = -1;
  int maxself = -1;
  int maxvar = -1;
};

/// Variable elimination evaluator bound to one diagram. Per-node statistics
/// are computed once and reused across interpretations.
class VeEvaluator {
 public:
  explicit VeEvaluator(const Gfodd& f);

  /// Identical results to eval_brute. Prefixes other than max* avg (or empty)
  /// are delegated to eval_brute.
  EvalResult evaluate(const Interpretation& I) const;

  const NodeVarStats& stats(NodeId n) const { return stats_.at(n); }
  bool uses_elimination() const { return supported_; }

 private:
  friend struct VeRun;
  Gfodd f_;
  bool supported_ = false;
  std::size_t leading_ = 0;
  std::vector<NodeVarStats> stats_;
  std::vector<std::vector<int>> agg_branch_;  // aggregated after the branch stage
  std::vector<std::vector<int>> agg_node_;    // aggregated after the node stage
};

EvalResult eval_ve(const Gfodd& f, const Interpretation& I);

/// Number of substitutions eval_brute enumerates on I (product of domain
/// sizes), saturating at the largest uint64 value.
std::uint64_t brute_substitution_count(const Gfodd& f, const Interpretation& I);

}  // namespace gfodd
