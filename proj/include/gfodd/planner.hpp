#pragma once

#include <map>
#include <string>
#include <vector>

#include "gfodd/diagram.hpp"
#include "gfodd/domain.hpp"
#include "gfodd/error.hpp"

namespace gfodd {

/// Object-maximized Q diagram per action schema; the leading MAX variables
/// are the schema parameters, in order.
using QMap = std::map<std::string, Gfodd>;

/// Replaces every atom whose predicate has a TVD under `variant` by that TVD,
/// with the schema parameters instantiated to `args`. The prefix is kept;
/// the result is normalized. Throws ModelError when a TVD would introduce a
/// variable unknown to v.
Gfodd regress(const Gfodd& v, const ActionVariant& variant, const std::vector<Variable>& params,
              const std::vector<Term>& args);

/// Probability diagram of `variant` with the parameters instantiated.
Gfodd instantiate_prob(const ActionVariant& variant, const std::vector<Variable>& params,
                       const std::vector<Term>& args);

/// Exogenous backup by the template method: the AVG variable is replaced by
/// a Skolem constant, one generic event is regressed (variants summed without
/// renaming apart) and the constant is lifted back. Throws FormError unless
/// v is of the max* avg form.
Gfodd sdp2(const Gfodd& v, const DomainSpec& d);

struct Sdp1Result {
  Gfodd value;
  QMap q;
};

/// Agent backup: per schema, regress through every variant, weight by the
/// variant probability, add the discounted sum to the reward and maximize
/// over the parameters; schemas are combined in name order.
Sdp1Result sdp1(const Gfodd& v, const DomainSpec& d);

/// Rewrites every special atom sp(u) to sp(y) for the AVG variable y. Throws
/// FormError with more than one AVG variable.
Gfodd unify_sp_args(const Gfodd& v, const Vocabulary& vocab);

struct BackupResult {
  Gfodd unreduced;
  Gfodd value;
  QMap q;
  std::size_t removed_edges = 0;
};

/// sdp1(sdp2(v)) followed by reduction on the focus states. When the domain
/// lets special atoms gate agent actions, v is first passed through
/// unify_sp_args.
BackupResult backup(const Gfodd& v, const DomainSpec& d, const std::vector<Interpretation>& focus);

struct IterationStats {
  int iteration = 0;
  std::size_t nodes_unreduced = 0;
  std::size_t nodes = 0;
  std::size_t prefix_size = 0;
  std::size_t removed_edges = 0;
  double seconds = 0;
};

struct PlanResult {
  std::vector<Gfodd> values;         // V_0 .. V_k
  std::vector<QMap> q_maps;          // q_maps[i] produced V_{i+1}
  QMap greedy_q;                     // Q diagrams of V_k, used for execution
  std::vector<IterationStats> stats;
};

struct PlanOptions {
  std::size_t node_budget = 50000;
  /// Also compute greedy_q (one extra unreduced backup).
  bool greedy_q = true;
};

/// Raised when a diagram exceeds the node budget; carries the iterations
/// completed so far.
class BudgetExceeded : public ResourceError {
 public:
  BudgetExceeded(const std::string& what, PlanResult partial)
      : ResourceError(what), partial_(std::move(partial)) {}
  const PlanResult& partial() const { return partial_; }

 private:
  PlanResult partial_;
};

/// V_0 = reward, V_i = backup(V_{i-1}) for i = 1..k.
PlanResult plan(const DomainSpec& d, int iterations, const std::vector<Interpretation>& focus,
                const PlanOptions& options = {});

}  // namespace gfodd
