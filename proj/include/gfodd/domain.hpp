#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfodd/diagram.hpp"
#include "gfodd/relational.hpp"

namespace gfodd {

/// Next-state truth value of `target` (an atom over distinct variables).
/// The diagram is open over the schema parameters followed by the target's
/// variables and has 0/1 leaves.
struct Tvd {
  Atom target;
  Gfodd diagram;
  friend bool operator==(const Tvd&, const Tvd&) = default;
};

struct ActionVariant {
  std::string name;
  /// Predicates without a TVD keep their value.
  std::vector<Tvd> tvds;
  /// Open over the schema parameters, leaves in [0, 1].
  Gfodd prob;

  const Tvd* find_tvd(const std::string& predicate) const;
  friend bool operator==(const ActionVariant&, const ActionVariant&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<Variable> params;
  std::vector<ActionVariant> variants;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

/// Object-centered event E(i) applied to every object i of param's sort.
struct ExogenousSchema {
  std::string name;
  Variable param;
  std::vector<ActionVariant> variants;
  friend bool operator==(const ExogenousSchema&, const ExogenousSchema&) = default;
};

/// State constraints used to enumerate consistent states.
struct Constraint {
  enum class Kind { ExactlyOne, Functional };
  Kind kind = Kind::ExactlyOne;
  /// ExactlyOne: unary predicates over one sort, exactly one holds per
  /// object. Functional: one binary predicate p(a, b), exactly one b per a.
  std::vector<std::string> predicates;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Object layout of ground instances: n objects of the scaled sort (named
/// prefix1..prefixn) followed by fixed objects.
struct InstanceShape {
  std::string scaled_sort;
  std::string name_prefix;
  std::vector<Object> fixed;
  int oracle_cap = 6;
  friend bool operator==(const InstanceShape&, const InstanceShape&) = default;
};

struct DomainSpec {
  std::string name;
  std::shared_ptr<const Vocabulary> vocab;
  std::vector<Constraint> constraints;
  std::vector<ActionSchema> actions;
  std::optional<ExogenousSchema> exogenous;
  Gfodd reward;
  Rational discount = Rational(9, 10);
  InstanceShape instance;

  const ActionSchema& action(const std::string& name) const;
  friend bool operator==(const DomainSpec& a, const DomainSpec& b);
};

struct AssumptionStatus {
  bool holds = true;
  std::vector<std::string> issues;
};

/// Status of A1 (object-centered exogenous events), A2 (they touch only
/// unary special predicates), A3 (special atoms do not gate agent actions)
/// and A4 (reward is max* avg with special atoms only on the avg variable).
struct AssumptionReport {
  std::array<AssumptionStatus, 4> items;
  bool all_hold() const;
  const AssumptionStatus& a(int k) const { return items.at(static_cast<std::size_t>(k - 1)); }
};

AssumptionReport check_assumptions(const DomainSpec& d);
std::string to_string(const AssumptionReport& r);

/// "ic" or "aic"; the discount may be overridden.
DomainSpec builtin_domain(const std::string& name, std::optional<Rational> discount = std::nullopt);
/// Text of a builtin domain file.
std::string builtin_domain_text(const std::string& name);

DomainSpec load_domain(std::string_view text);
std::string save_domain(const DomainSpec& d);
/// Builtin name or a path to a domain file.
DomainSpec resolve_domain(const std::string& name_or_path);

// ---------------------------------------------------------------------------
// Ground instances

std::shared_ptr<const Universe> instance_universe(const DomainSpec& d, int n);

/// One choice point of the state space: a free atom, one exactly-one group
/// on an object, or the value of a functional predicate on an object.
struct StateSlot {
  std::vector<std::size_t> fact_slots;  // fact slot set by choice k (or a single slot for a free atom)
  bool binary = false;                  // free atom: choice 0 = false, 1 = true
  std::size_t arity() const { return binary ? 2 : fact_slots.size(); }
};

/// Choice points in enumeration order (first slowest).
std::vector<StateSlot> state_slots(const DomainSpec& d, const Universe& u);
std::uint64_t state_count(const DomainSpec& d, int n);
/// Consistent states with n objects of the scaled sort, in mixed-radix order.
std::vector<Interpretation> enumerate_states(const DomainSpec& d, int n);
Interpretation state_from_choices(const std::shared_ptr<const Universe>& u, const std::vector<StateSlot>& slots,
                                  const std::vector<int>& choices);
/// True when every constraint holds in s.
bool is_consistent(const DomainSpec& d, const Interpretation& s);

/// Focus set for reduction: all consistent states with `shops` objects of the
/// scaled sort.
std::vector<Interpretation> all_focus_states(const DomainSpec& d, int shops = 2);

}  // namespace gfodd
