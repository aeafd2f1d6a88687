#include "gfodd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <type_traits>

#include "gfodd/error.hpp"

namespace gfodd {

Rational value_at(const Gfodd& f, const Interpretation& s, const Substitution& theta) {
  NodeId id = 0;
  while (!f.node(id).is_leaf) {
    const Node& n = f.node(id);
    bool t = s.holds(apply_substitution(n.atom, theta, nullptr, &s.universe()));
    id = t ? n.true_child : n.false_child;
  }
  return f.node(id).value;
}

std::string to_string(const GroundAction& a) {
  std::string out = a.schema + "(";
  for (std::size_t k = 0; k < a.binding.size(); ++k) {
    if (k) out += ", ";
    out += a.binding.bindings[k].second;
  }
  return out + ")";
}

std::vector<GroundAction> ground_actions(const DomainSpec& d, const std::shared_ptr<const Universe>& u) {
  std::vector<const ActionSchema*> schemas;
  for (const auto& a : d.actions) schemas.push_back(&a);
  std::sort(schemas.begin(), schemas.end(), [](auto* a, auto* b) { return a->name < b->name; });
  Interpretation empty(u);
  std::vector<GroundAction> out;
  for (const auto* a : schemas) {
    for (auto& theta : enumerate_bindings(a->params, empty)) out.push_back({a->name, std::move(theta)});
  }
  return out;
}

namespace {

Substitution bind_params(const std::vector<Variable>& params, const std::vector<std::string>& args) {
  if (params.size() != args.size()) throw ArgumentError("wrong number of action arguments");
  Substitution theta;
  for (std::size_t k = 0; k < params.size(); ++k) theta.bind(params[k], args[k]);
  return theta;
}

std::vector<std::string> objects_of(const Substitution& theta) {
  std::vector<std::string> out;
  for (const auto& [v, o] : theta.bindings) out.push_back(o);
  return out;
}

void accumulate(StateDistribution& dist, std::map<std::vector<bool>, std::size_t>& where, Interpretation s,
                const Rational& p) {
  auto [it, fresh] = where.try_emplace(s.fact_bits(), dist.size());
  if (fresh) {
    dist.emplace_back(std::move(s), p);
  } else {
    dist[it->second].second += p;
  }
}

}  // namespace

Interpretation apply_variant(const ActionVariant& v, const std::vector<Variable>& params,
                             const std::vector<std::string>& args, const Interpretation& s) {
  Substitution base = bind_params(params, args);
  Interpretation next = s;
  const Vocabulary& vocab = s.vocabulary();
  for (const auto& tvd : v.tvds) {
    std::vector<Variable> targets;
    for (const auto& t : tvd.target.args) targets.push_back(t.as_variable());
    std::size_t pred = *vocab.find_predicate(tvd.target.predicate);
    std::vector<int> objects(targets.size());
    for (const auto& tuple : enumerate_bindings(targets, s)) {
      Substitution theta = base;
      for (std::size_t k = 0; k < tuple.size(); ++k) {
        theta.bindings.push_back(tuple.bindings[k]);
        objects[k] = s.universe().object_index(tuple.bindings[k].second);
      }
      Rational truth = value_at(tvd.diagram, s, theta);
      next.set(pred, objects, truth != 0);
    }
  }
  return next;
}

StateDistribution agent_stage(const DomainSpec& d, const Interpretation& s, const GroundAction& a) {
  const ActionSchema& schema = d.action(a.schema);
  auto args = objects_of(a.binding);
  Substitution theta = bind_params(schema.params, args);
  StateDistribution out;
  std::map<std::vector<bool>, std::size_t> where;
  for (const auto& v : schema.variants) {
    Rational p = value_at(v.prob, s, theta);
    if (p == 0) continue;
    accumulate(out, where, apply_variant(v, schema.params, args, s), p);
  }
  return out;
}

StateDistribution exogenous_stage(const DomainSpec& d, const Interpretation& s, const std::vector<int>& order) {
  StateDistribution dist{{s, Rational(1)}};
  if (!d.exogenous) return dist;
  const auto& x = *d.exogenous;
  const Universe& u = s.universe();
  std::vector<int> objects = order.empty() ? u.objects_of(x.param.sort) : order;
  for (int i : objects) {
    if (!u.object_has_sort(i, x.param.sort)) throw ArgumentError("event object has the wrong sort");
    std::vector<std::string> args{u.objects()[static_cast<std::size_t>(i)].name};
    Substitution theta = bind_params({x.param}, args);
    StateDistribution next;
    std::map<std::vector<bool>, std::size_t> where;
    for (const auto& [state, p] : dist) {
      for (const auto& v : x.variants) {
        Rational q = value_at(v.prob, state, theta);
        if (q == 0) continue;
        accumulate(next, where, apply_variant(v, {x.param}, args, state), p * q);
      }
    }
    dist = std::move(next);
  }
  return dist;
}

StateDistribution ground_transition(const DomainSpec& d, const Interpretation& s, const GroundAction& a) {
  StateDistribution out;
  std::map<std::vector<bool>, std::size_t> where;
  for (const auto& [mid, p] : agent_stage(d, s, a)) {
    for (auto& [next, q] : exogenous_stage(d, mid)) accumulate(out, where, std::move(next), p * q);
  }
  return out;
}

std::size_t GroundMdp::index_of(const Interpretation& s) const {
  auto it = state_index.find(s.fact_bits());
  if (it == state_index.end()) throw ArgumentError("state is not part of the ground model");
  return it->second;
}

std::size_t GroundMdp::action_index(const GroundAction& a) const {
  auto it = std::find(actions.begin(), actions.end(), a);
  if (it == actions.end()) throw ArgumentError("unknown ground action " + to_string(a));
  return static_cast<std::size_t>(it - actions.begin());
}

GroundMdp build_ground_mdp(const DomainSpec& d, int n) {
  if (n > d.instance.oracle_cap) {
    throw ResourceError("ground oracle for " + d.name + " is capped at " + std::to_string(d.instance.oracle_cap) + " " +
                        d.instance.scaled_sort + " objects (asked for " + std::to_string(n) + ")");
  }
  GroundMdp m;
  m.n = n;
  m.discount = d.discount;
  m.states = enumerate_states(d, n);
  for (std::size_t i = 0; i < m.states.size(); ++i) m.state_index.emplace(m.states[i].fact_bits(), i);
  m.actions = ground_actions(d, m.states.front().universe_ptr());
  m.reward = tabulate(d.reward, m.states);

  auto to_index = [&](const Interpretation& s) {
    auto it = m.state_index.find(s.fact_bits());
    if (it == m.state_index.end()) throw ModelError("transition leaves the consistent states: " + to_string(s));
    return it->second;
  };
  // The exogenous stage depends only on the state reached by the agent.
  std::vector<std::optional<TransitionRow>> exo(m.states.size());
  auto exo_row = [&](std::size_t i) -> const TransitionRow& {
    if (!exo[i]) {
      TransitionRow row;
      for (const auto& [s, p] : exogenous_stage(d, m.states[i])) row.emplace_back(to_index(s), p);
      exo[i] = std::move(row);
    }
    return *exo[i];
  };
  m.transitions.resize(m.actions.size());
  for (std::size_t a = 0; a < m.actions.size(); ++a) {
    auto& rows = m.transitions[a];
    rows.reserve(m.states.size());
    for (const auto& s : m.states) {
      std::map<std::size_t, Rational> acc;
      for (const auto& [mid, p] : agent_stage(d, s, m.actions[a])) {
        for (const auto& [j, q] : exo_row(to_index(mid))) acc[j] += p * q;
      }
      rows.emplace_back(acc.begin(), acc.end());
    }
  }
  return m;
}

ValueTable tabulate(const Gfodd& f, const std::vector<Interpretation>& states) {
  VeEvaluator ev(f);
  ValueTable out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(ev.evaluate(s).value);
  return out;
}

ValueTable exact_backup(const GroundMdp& m, const ValueTable& v) {
  if (v.size() != m.states.size()) throw ArgumentError("value table has the wrong size");
  ValueTable out(m.states.size());
  Rational q;
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    for (std::size_t a = 0; a < m.actions.size(); ++a) {
      q = 0;
      for (const auto& [j, p] : m.transitions[a][s]) q += p * v[j];
      q = m.reward[s] + m.discount * q;
      if (a == 0 || q > out[s]) out[s] = q;
    }
  }
  return out;
}

namespace {

struct DoubleModel {
  double gamma;
  std::vector<double> reward;
  std::vector<std::vector<std::vector<std::pair<std::size_t, double>>>> rows;  // [action][state]
};

DoubleModel to_double(const GroundMdp& m) {
  DoubleModel out;
  out.gamma = m.discount.get_d();
  for (const auto& r : m.reward) out.reward.push_back(r.get_d());
  out.rows.resize(m.actions.size());
  for (std::size_t a = 0; a < m.actions.size(); ++a) {
    for (const auto& row : m.transitions[a]) {
      auto& dst = out.rows[a].emplace_back();
      for (const auto& [j, p] : row) dst.emplace_back(j, p.get_d());
    }
  }
  return out;
}

double q_value(const DoubleModel& dm, std::size_t a, std::size_t s, const std::vector<double>& v) {
  double q = 0;
  for (const auto& [j, p] : dm.rows[a][s]) q += p * v[j];
  return dm.reward[s] + dm.gamma * q;
}

std::vector<std::size_t> greedy_of(const DoubleModel& dm, const std::vector<double>& v) {
  std::vector<std::size_t> out(v.size());
  std::vector<double> q(dm.rows.size());
  for (std::size_t s = 0; s < v.size(); ++s) {
    for (std::size_t a = 0; a < q.size(); ++a) q[a] = q_value(dm, a, s, v);
    double best = *std::max_element(q.begin(), q.end());
    double slack = 1e-9 * (1 + std::abs(best));
    out[s] = static_cast<std::size_t>(std::find_if(q.begin(), q.end(), [&](double x) { return x >= best - slack; }) -
                                      q.begin());
  }
  return out;
}

// Dense Gaussian elimination; partial pivoting by magnitude for doubles, first
// nonzero pivot for exact arithmetic.
template <typename T>
std::vector<T> solve(std::vector<std::vector<T>> a, std::vector<T> b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c; r < n; ++r) {
      if constexpr (std::is_same_v<T, double>) {
        if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
      } else {
        if (a[r][c] != 0) {
          pivot = r;
          break;
        }
      }
    }
    if (a[pivot][c] == 0) throw InternalError("singular policy evaluation system");
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      T f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<T> x(n);
  for (std::size_t r = n; r-- > 0;) {
    T acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= a[r][k] * x[k];
    x[r] = acc / a[r][r];
  }
  return x;
}

template <typename T>
std::vector<T> evaluate_policy_as(const GroundMdp& m, const std::vector<std::size_t>& policy) {
  std::size_t n = m.states.size();
  if (policy.size() != n) throw ArgumentError("policy table has the wrong size");
  auto cast = [](const Rational& r) {
    if constexpr (std::is_same_v<T, double>) {
      return r.get_d();
    } else {
      return T(r);
    }
  };
  T gamma = cast(m.discount);
  std::vector<std::vector<T>> a(n, std::vector<T>(n, T(0)));
  std::vector<T> b(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (policy[s] >= m.actions.size()) throw ArgumentError("policy names an unknown action");
    a[s][s] = T(1);
    for (const auto& [j, p] : m.transitions[policy[s]][s]) a[s][j] -= gamma * cast(p);
    b[s] = cast(m.reward[s]);
  }
  return solve(std::move(a), std::move(b));
}

}  // namespace

std::vector<std::size_t> greedy_table(const GroundMdp& m, const std::vector<double>& v) {
  if (v.size() != m.states.size()) throw ArgumentError("value table has the wrong size");
  return greedy_of(to_double(m), v);
}

ViResult exact_vi(const GroundMdp& m, double tolerance, int max_sweeps) {
  if (!(tolerance > 0)) throw ArgumentError("tolerance must be positive");
  DoubleModel dm = to_double(m);
  ViResult r;
  r.value.assign(m.states.size(), 0.0);
  std::vector<double> next(m.states.size());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double delta = 0;
    for (std::size_t s = 0; s < next.size(); ++s) {
      double best = q_value(dm, 0, s, r.value);
      for (std::size_t a = 1; a < m.actions.size(); ++a) best = std::max(best, q_value(dm, a, s, r.value));
      next[s] = best;
      delta = std::max(delta, std::abs(best - r.value[s]));
    }
    r.value.swap(next);
    r.deltas.push_back(delta);
    if (delta < tolerance) break;
  }
  if (r.deltas.back() >= tolerance) throw ResourceError("value iteration did not converge");
  r.policy = greedy_of(dm, r.value);
  return r;
}

ValueTable policy_value_exact(const GroundMdp& m, const std::vector<std::size_t>& policy) {
  return evaluate_policy_as<Rational>(m, policy);
}

std::vector<double> policy_value(const GroundMdp& m, const std::vector<std::size_t>& policy) {
  return evaluate_policy_as<double>(m, policy);
}

}  // namespace gfodd
