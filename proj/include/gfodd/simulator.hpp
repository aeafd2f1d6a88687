#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "gfodd/domain.hpp"
#include "gfodd/eval.hpp"
#include "gfodd/oracle.hpp"
#include "gfodd/planner.hpp"

namespace gfodd {

using Rng = std::mt19937_64;

/// splitmix64 step, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);
/// Uniform double in [0, 1) from 53 random bits.
double uniform01(Rng& rng);

class Policy {
 public:
  virtual ~Policy() = default;
  virtual GroundAction act(const Interpretation& s, Rng& rng) const = 0;
  virtual std::string name() const = 0;
};

struct GreedyChoice {
  GroundAction action;
  Rational value;
};

/// Best schema by Q value, ties to the earlier schema name; the binding is the
/// evaluator's winner for that schema. Throws EmptyDomainError when a
/// parameter sort has no objects.
GreedyChoice greedy_action(const DomainSpec& d, const QMap& q, const Interpretation& s);

class GreedyPolicy : public Policy {
 public:
  /// q must hold a diagram for every action schema of d.
  GreedyPolicy(const DomainSpec& d, QMap q);
  GroundAction act(const Interpretation& s, Rng& rng) const override;
  std::string name() const override { return "greedy"; }
  GreedyChoice choose(const Interpretation& s) const;

 private:
  QMap q_;
  std::vector<std::pair<std::string, VeEvaluator>> evaluators_;
  std::vector<std::vector<Variable>> params_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::vector<bool>, GreedyChoice> memo_;
};

/// Uniform over all ground actions.
class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(const DomainSpec& d) : d_(d) {}
  GroundAction act(const Interpretation& s, Rng& rng) const override;
  std::string name() const override { return "random"; }

 private:
  DomainSpec d_;
};

/// Lookup in a ground policy table, e.g. the one from exact_vi.
class TabularPolicy : public Policy {
 public:
  TabularPolicy(std::shared_ptr<const GroundMdp> m, std::vector<std::size_t> table);
  GroundAction act(const Interpretation& s, Rng& rng) const override;
  std::string name() const override { return "tabular"; }
  const GroundMdp& mdp() const { return *m_; }

 private:
  std::shared_ptr<const GroundMdp> m_;
  std::vector<std::size_t> table_;
};

/// Ground policy table of a Policy over every state of m (random draws use
/// `seed`).
std::vector<std::size_t> policy_table(const Policy& p, const GroundMdp& m, std::uint64_t seed = 0);

struct StepResult {
  Interpretation next;
  Rational reward;
};

/// Reward of s, then the sampled agent variant, then each event E(i) in
/// object order.
StepResult step(const DomainSpec& d, const Interpretation& s, const GroundAction& a, Rng& rng);

/// Uniform over consistent states with n objects of the scaled sort.
Interpretation random_state(const DomainSpec& d, const std::shared_ptr<const Universe>& u, Rng& rng);

struct RolloutConfig {
  int n = 4;
  int instances = 15;
  int runs = 30;
  int horizon = 30;
  /// Discount of returns; the domain's when unset.
  std::optional<double> gamma;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct InstanceStats {
  Interpretation initial;
  std::vector<double> returns;
  double mean = 0;
  double stddev = 0;
};

struct RolloutStats {
  std::string policy;
  RolloutConfig config;
  std::vector<InstanceStats> instances;
  double mean = 0;
  double stddev = 0;
};

RolloutStats evaluate_policy(const DomainSpec& d, const Policy& p, const RolloutConfig& c);

}  // namespace gfodd
