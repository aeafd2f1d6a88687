#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gfodd/domain.hpp"
#include "gfodd/eval.hpp"

namespace gfodd {

/// Value of an open diagram along the path selected by `theta`, which must
/// bind every variable of f. Prefix variables are ignored.
Rational value_at(const Gfodd& f, const Interpretation& s, const Substitution& theta);

/// Schema instantiated with objects.
struct GroundAction {
  std::string schema;
  Substitution binding;
  friend bool operator==(const GroundAction&, const GroundAction&) = default;
};

std::string to_string(const GroundAction& a);

/// All ground actions over u, ordered by schema name, then by binding in
/// object order (first parameter slowest).
std::vector<GroundAction> ground_actions(const DomainSpec& d, const std::shared_ptr<const Universe>& u);

/// s after one deterministic variant: every TVD is evaluated on s and written
/// simultaneously.
Interpretation apply_variant(const ActionVariant& v, const std::vector<Variable>& params,
                             const std::vector<std::string>& args, const Interpretation& s);

using StateDistribution = std::vector<std::pair<Interpretation, Rational>>;

/// Variant mixture of a ground agent action.
StateDistribution agent_stage(const DomainSpec& d, const Interpretation& s, const GroundAction& a);

/// E(i) applied to every object i in `order` (object indices; empty means
/// declaration order), one after the other.
StateDistribution exogenous_stage(const DomainSpec& d, const Interpretation& s, const std::vector<int>& order = {});

/// Agent action followed by all exogenous events.
StateDistribution ground_transition(const DomainSpec& d, const Interpretation& s, const GroundAction& a);

/// Sparse row: (state index, probability), sorted by index.
using TransitionRow = std::vector<std::pair<std::size_t, Rational>>;

struct GroundMdp {
  int n = 0;
  Rational discount;
  std::vector<Interpretation> states;
  std::vector<GroundAction> actions;
  /// transitions[action][state]
  std::vector<std::vector<TransitionRow>> transitions;
  std::vector<Rational> reward;

  /// Throws ArgumentError for a state outside the enumeration.
  std::size_t index_of(const Interpretation& s) const;
  std::size_t action_index(const GroundAction& a) const;

  std::unordered_map<std::vector<bool>, std::size_t> state_index;
};

/// Grounds d with n objects of the scaled sort. Throws ResourceError above the
/// domain's oracle cap.
GroundMdp build_ground_mdp(const DomainSpec& d, int n);

using ValueTable = std::vector<Rational>;

ValueTable tabulate(const Gfodd& f, const std::vector<Interpretation>& states);

/// One exact Bellman backup.
ValueTable exact_backup(const GroundMdp& m, const ValueTable& v);

/// Best action per state under v (first action among ties).
std::vector<std::size_t> greedy_table(const GroundMdp& m, const std::vector<double>& v);

struct ViResult {
  std::vector<double> value;
  std::vector<std::size_t> policy;
  /// Sup-norm change of each sweep.
  std::vector<double> deltas;
};

/// Value iteration in doubles from the zero table until the sup-norm change
/// drops below tolerance.
ViResult exact_vi(const GroundMdp& m, double tolerance, int max_sweeps = 100000);

/// Value of a stationary deterministic policy, solving (I - gamma P) V = R.
ValueTable policy_value_exact(const GroundMdp& m, const std::vector<std::size_t>& policy);
std::vector<double> policy_value(const GroundMdp& m, const std::vector<std::size_t>& policy);

}  // namespace gfodd
