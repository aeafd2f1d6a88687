#include "gfodd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "gfodd/error.hpp"

namespace gfodd {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

GreedyChoice choose_with(const std::vector<std::pair<std::string, VeEvaluator>>& evaluators,
                         const std::vector<std::vector<Variable>>& params, const Interpretation& s) {
  GreedyChoice best;
  bool first = true;
  for (std::size_t k = 0; k < evaluators.size(); ++k) {
    EvalResult r;
    try {
      r = evaluators[k].second.evaluate(s);
    } catch (const EmptyDomainError& e) {
      throw EmptyDomainError("no applicable action: " + std::string(e.what()));
    }
    if (!first && r.value <= best.value) continue;
    if (r.winner.size() < params[k].size()) {
      throw ModelError("Q diagram of " + evaluators[k].first + " does not lead with its parameters");
    }
    best.value = r.value;
    best.action.schema = evaluators[k].first;
    best.action.binding = {};
    for (std::size_t i = 0; i < params[k].size(); ++i) best.action.binding.bind(params[k][i], r.winner.bindings[i].second);
    first = false;
  }
  if (first) throw ModelError("no action schemas to choose from");
  return best;
}

std::size_t param_count(const Gfodd& q) {
  std::size_t k = 0;
  while (k < q.prefix().size() && q.prefix()[k].agg == Aggregator::Max) ++k;
  return k;
}

// Picks a variant by probability mass. The last variant with positive mass
// absorbs rounding.
const ActionVariant* sample_variant(const std::vector<ActionVariant>& variants, const Interpretation& s,
                                    const Substitution& theta, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0;
  const ActionVariant* last = nullptr;
  for (const auto& v : variants) {
    double p = value_at(v.prob, s, theta).get_d();
    if (p <= 0) continue;
    last = &v;
    acc += p;
    if (u < acc) return &v;
  }
  if (!last) throw ModelError("no variant has positive probability");
  return last;
}

void summarize(const std::vector<double>& xs, double& mean, double& stddev) {
  mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  stddev = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
}

}  // namespace

GreedyChoice greedy_action(const DomainSpec& d, const QMap& q, const Interpretation& s) {
  return GreedyPolicy(d, q).choose(s);
}

GreedyPolicy::GreedyPolicy(const DomainSpec& d, QMap q) : q_(std::move(q)) {
  for (const auto& a : d.actions) {
    auto it = q_.find(a.name);
    if (it == q_.end()) throw ModelError("no Q diagram for action " + a.name);
    std::size_t k = param_count(it->second);
    if (k < a.params.size()) throw ModelError("Q diagram of " + a.name + " does not lead with its parameters");
    for (std::size_t i = 0; i < a.params.size(); ++i) {
      if (it->second.prefix()[i].var.sort != a.params[i].sort) {
        throw ModelError("Q diagram of " + a.name + " has a parameter of the wrong sort");
      }
    }
  }
  for (const auto& [name, f] : q_) {
    evaluators_.emplace_back(name, VeEvaluator(f));
    params_.push_back(d.action(name).params);
  }
}

GreedyChoice GreedyPolicy::choose(const Interpretation& s) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(s.fact_bits()); it != memo_.end()) return it->second;
  }
  GreedyChoice c = choose_with(evaluators_, params_, s);
  std::lock_guard lock(mutex_);
  return memo_.emplace(s.fact_bits(), std::move(c)).first->second;
}

GroundAction GreedyPolicy::act(const Interpretation& s, Rng&) const { return choose(s).action; }

GroundAction RandomPolicy::act(const Interpretation& s, Rng& rng) const {
  auto all = ground_actions(d_, s.universe_ptr());
  if (all.empty()) throw ModelError("no ground actions");
  return all[static_cast<std::size_t>(rng() % all.size())];
}

TabularPolicy::TabularPolicy(std::shared_ptr<const GroundMdp> m, std::vector<std::size_t> table)
    : m_(std::move(m)), table_(std::move(table)) {
  if (table_.size() != m_->states.size()) throw ArgumentError("policy table has the wrong size");
}

GroundAction TabularPolicy::act(const Interpretation& s, Rng&) const {
  return m_->actions.at(table_[m_->index_of(s)]);
}

std::vector<std::size_t> policy_table(const Policy& p, const GroundMdp& m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(m.states.size());
  for (const auto& s : m.states) {
    GroundAction a = p.act(s, rng);
    out.push_back(m.action_index(a));
  }
  return out;
}

StepResult step(const DomainSpec& d, const Interpretation& s, const GroundAction& a, Rng& rng) {
  StepResult r{s, eval_ve(d.reward, s).value};
  const ActionSchema& schema = d.action(a.schema);
  std::vector<std::string> args;
  Substitution theta;
  if (a.binding.size() != schema.params.size()) throw ArgumentError("wrong number of arguments for " + a.schema);
  for (std::size_t k = 0; k < schema.params.size(); ++k) {
    args.push_back(a.binding.bindings[k].second);
    theta.bind(schema.params[k], args.back());
  }
  const ActionVariant* v = sample_variant(schema.variants, s, theta, rng);
  r.next = apply_variant(*v, schema.params, args, s);
  if (d.exogenous) {
    const auto& x = *d.exogenous;
    const Universe& u = s.universe();
    for (int i : u.objects_of(x.param.sort)) {
      std::vector<std::string> obj{u.objects()[static_cast<std::size_t>(i)].name};
      Substitution ti;
      ti.bind(x.param, obj[0]);
      const ActionVariant* e = sample_variant(x.variants, r.next, ti, rng);
      r.next = apply_variant(*e, {x.param}, obj, r.next);
    }
  }
  return r;
}

Interpretation random_state(const DomainSpec& d, const std::shared_ptr<const Universe>& u, Rng& rng) {
  auto slots = state_slots(d, *u);
  std::vector<int> choices;
  choices.reserve(slots.size());
  for (const auto& slot : slots) choices.push_back(static_cast<int>(rng() % slot.arity()));
  return state_from_choices(u, slots, choices);
}

RolloutStats evaluate_policy(const DomainSpec& d, const Policy& p, const RolloutConfig& c) {
  if (c.horizon < 1) throw ArgumentError("horizon must be at least 1");
  if (c.instances < 1 || c.runs < 1) throw ArgumentError("instances and runs must be positive");
  if (c.n < 1) throw EmptyDomainError("at least one " + d.instance.scaled_sort + " object is required");
  if (auto* t = dynamic_cast<const TabularPolicy*>(&p); t && t->mdp().n != c.n) {
    throw ArgumentError("tabular policy was built for " + std::to_string(t->mdp().n) + " objects");
  }
  double gamma = c.gamma ? *c.gamma : d.discount.get_d();
  auto u = instance_universe(d, c.n);

  RolloutStats out;
  out.policy = p.name();
  out.config = c;
  for (int k = 0; k < c.instances; ++k) {
    Rng rng(mix_seed(c.seed, static_cast<std::uint64_t>(k)));
    out.instances.push_back({random_state(d, u, rng), {}, 0, 0});
  }

  auto run_instance = [&](std::size_t k) {
    auto& inst = out.instances[k];
    inst.returns.resize(static_cast<std::size_t>(c.runs));
    for (int r = 0; r < c.runs; ++r) {
      Rng rng(mix_seed(mix_seed(c.seed, 1000003 + k), static_cast<std::uint64_t>(r)));
      Interpretation s = inst.initial;
      double total = 0;
      double weight = 1;
      for (int t = 0; t < c.horizon; ++t) {
        auto st = step(d, s, p.act(s, rng), rng);
        total += weight * st.reward.get_d();
        weight *= gamma;
        s = std::move(st.next);
      }
      inst.returns[static_cast<std::size_t>(r)] = total;
    }
    summarize(inst.returns, inst.mean, inst.stddev);
  };

  std::size_t workers = static_cast<std::size_t>(std::max(1, c.threads));
  if (workers == 1) {
    for (std::size_t k = 0; k < out.instances.size(); ++k) run_instance(k);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < out.instances.size(); k += workers) run_instance(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<double> all;
  for (const auto& inst : out.instances) all.insert(all.end(), inst.returns.begin(), inst.returns.end());
  summarize(all, out.mean, out.stddev);
  return out;
}

}  // namespace gfodd
