#include "gfodd/planner.hpp"

#include <chrono>

#include "gfodd/apply.hpp"
#include "gfodd/detail/builder.hpp"
#include "gfodd/io.hpp"
#include "gfodd/reduce.hpp"

namespace gfodd {

namespace {

std::map<Term, Term> param_renaming(const std::vector<Variable>& params, const std::vector<Term>& args) {
  if (params.size() != args.size()) throw ArgumentError("wrong number of action arguments");
  std::map<Term, Term> out;
  for (std::size_t k = 0; k < params.size(); ++k) out.emplace(Term::variable(params[k]), args[k]);
  return out;
}

std::string avg_sort(const DomainSpec& d) {
  if (is_a4(d.reward)) return d.reward.prefix().back().var.sort;
  if (d.exogenous) return d.exogenous->param.sort;
  return d.vocab->sorts().front().name;
}

Gfodd with_param_head(const Gfodd& q, const std::vector<Variable>& params, const std::vector<Term>& consts) {
  Gfodd out = q;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Variable v{fresh_name(params[k].name, used_names(out)), params[k].sort};
    if (out.constants().count(consts[k])) {
      out = lift_constant(out, consts[k], v, Aggregator::Max, k);
    } else {
      // The parameter does not matter; keep it so that the Q diagram still
      // names every parameter.
      Prefix prefix = out.prefix();
      prefix.insert(prefix.begin() + static_cast<long>(k), PrefixEntry{v, Aggregator::Max});
      out = rebuild(out, {}, out.free_vars(), prefix, false);
    }
  }
  return out;
}

Sdp1Result unreduced_backup(const Gfodd& v, const DomainSpec& d, bool unify) {
  Gfodd in = unify ? unify_sp_args(v, *d.vocab) : v;
  return sdp1(sdp2(in, d), d);
}

}  // namespace

Gfodd regress(const Gfodd& v, const ActionVariant& variant, const std::vector<Variable>& params,
              const std::vector<Term>& args) {
  auto base = param_renaming(params, args);
  DiagramBuilder b(v.order_variables());
  std::map<Atom, DiagramBuilder::Ref> tvd_memo;
  const auto& nodes = v.nodes();
  std::vector<DiagramBuilder::Ref> mapped(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& n = nodes[i];
    if (n.is_leaf) {
      mapped[i] = b.leaf(n.value);
      continue;
    }
    const Tvd* tvd = n.atom.is_equality() ? nullptr : variant.find_tvd(n.atom.predicate);
    if (!tvd) {
      mapped[i] = b.ite_atom(n.atom, mapped[n.true_child], mapped[n.false_child]);
      continue;
    }
    auto it = tvd_memo.find(n.atom);
    if (it == tvd_memo.end()) {
      auto renaming = base;
      for (std::size_t k = 0; k < tvd->target.args.size(); ++k) {
        renaming[tvd->target.args[k]] = n.atom.args.at(k);
      }
      for (const auto& var : tvd->diagram.order_variables()) {
        if (!renaming.count(Term::variable(var))) {
          throw ModelError("TVD of " + to_string(tvd->target) + " introduces variable " + var.name);
        }
      }
      it = tvd_memo.emplace(n.atom, b.import(tvd->diagram, renaming)).first;
    }
    mapped[i] = b.ite(it->second, mapped[n.true_child], mapped[n.false_child]);
  }
  return b.finish(v.free_vars(), v.prefix(), mapped[0], true);
}

Gfodd instantiate_prob(const ActionVariant& variant, const std::vector<Variable>& params,
                       const std::vector<Term>& args) {
  std::vector<Variable> free;
  for (const auto& a : args) {
    if (a.is_variable()) free.push_back(a.as_variable());
  }
  return rebuild(variant.prob, param_renaming(params, args), free, {}, true);
}

Gfodd sdp2(const Gfodd& v, const DomainSpec& d) {
  if (!d.exogenous) return v;
  const auto& x = *d.exogenous;
  Gfodd w = as_a4(v, x.param.sort);
  Variable y = w.prefix().back().var;
  if (y.sort != x.param.sort) {
    throw FormError("average variable " + y.name + " ranges over " + y.sort + ", events over " + x.param.sort);
  }
  Term a = Term::constant(fresh_name("@a", used_names(w)), y.sort);
  Gfodd bound = bind_variable(w, y.name, a);

  Gfodd sum;
  for (std::size_t j = 0; j < x.variants.size(); ++j) {
    const auto& var = x.variants[j];
    Gfodd term = apply_open(ApplyOp::Multiply, regress(bound, var, {x.param}, {a}), instantiate_prob(var, {x.param}, {a}));
    // Variants share every variable: they are deliberately not renamed apart.
    sum = j == 0 ? term : apply_open(ApplyOp::Add, sum, term);
  }

  Variable lifted{fresh_name(y.name, used_names(sum)), y.sort};
  if (sum.constants().count(a)) return lift_constant(sum, a, lifted, Aggregator::Avg, sum.prefix().size());
  Prefix prefix = sum.prefix();
  prefix.push_back({lifted, Aggregator::Avg});
  return rebuild(sum, {}, sum.free_vars(), prefix, false);
}

Sdp1Result sdp1(const Gfodd& v, const DomainSpec& d) {
  std::string s = avg_sort(d);
  Gfodd reward = as_a4(d.reward, s);
  Sdp1Result out;
  for (const auto& action : d.actions) {
    auto used = used_names(v);
    for (const auto& n : used_names(reward)) used.insert(n);
    std::vector<Term> consts;
    for (const auto& p : action.params) {
      auto name = fresh_name("@" + p.name, used);
      used.insert(name);
      consts.push_back(Term::constant(name, p.sort));
    }
    Gfodd sum;
    for (std::size_t j = 0; j < action.variants.size(); ++j) {
      const auto& var = action.variants[j];
      Gfodd term = regress(v, var, action.params, consts);
      if (!(var.prob.is_constant() && var.prob.node(0).value == 1)) {
        term = apply_open(ApplyOp::Multiply, term, instantiate_prob(var, action.params, consts));
      }
      term = as_a4(term, s);
      // Normalizing may drop an AVG variable the sum no longer reads.
      sum = j == 0 ? term : as_a4(add_shared_avg(sum, term), s);
    }
    Gfodd q = add_shared_avg(reward, as_a4(scale(sum, d.discount), s));
    out.q.emplace(action.name, with_param_head(q, action.params, consts));
  }
  bool first = true;
  for (const auto& [name, q] : out.q) {
    out.value = first ? q : max_expr(out.value, q);
    first = false;
  }
  out.value = normalize(out.value);
  return out;
}

Gfodd unify_sp_args(const Gfodd& v, const Vocabulary& vocab) {
  const Variable* y = nullptr;
  for (const auto& p : v.prefix()) {
    if (p.agg != Aggregator::Avg) continue;
    if (y) throw FormError("unify_sp_args needs a single average variable, got " + write_prefix(v.prefix()));
    y = &p.var;
  }
  if (!y) return v;
  Term ty = Term::variable(*y);
  DiagramBuilder b(v.order_variables());
  auto root = b.import(v, [&](const Atom& a) {
    if (a.is_equality() || a.args.size() != 1) return a;
    auto i = vocab.find_predicate(a.predicate);
    if (!i || !vocab.predicates()[*i].is_special) return a;
    return Atom{a.predicate, {ty}};
  });
  return b.finish(v.free_vars(), v.prefix(), root, true);
}

BackupResult backup(const Gfodd& v, const DomainSpec& d, const std::vector<Interpretation>& focus) {
  auto r = unreduced_backup(v, d, !check_assumptions(d).a(3).holds);
  auto red = reduce_with_report(r.value, focus);
  return {r.value, red.diagram, std::move(r.q), red.removed.size()};
}

PlanResult plan(const DomainSpec& d, int iterations, const std::vector<Interpretation>& focus,
                const PlanOptions& options) {
  if (iterations < 1) throw ArgumentError("at least one iteration is required");
  if (focus.empty()) throw ArgumentError("the focus set is empty");
  bool unify = !check_assumptions(d).a(3).holds;
  PlanResult out;
  out.values.push_back(normalize(d.reward));
  auto over_budget = [&](const Gfodd& f, const std::string& what) {
    if (f.size() > options.node_budget) {
      throw BudgetExceeded(what + " has " + std::to_string(f.size()) + " nodes (budget " +
                               std::to_string(options.node_budget) + ")",
                           out);
    }
  };
  for (int i = 1; i <= iterations; ++i) {
    auto start = std::chrono::steady_clock::now();
    auto r = unreduced_backup(out.values.back(), d, unify);
    std::string label = "iteration " + std::to_string(i);
    for (const auto& [name, q] : r.q) over_budget(q, label + " Q(" + name + ")");
    over_budget(r.value, label + " value");
    auto red = reduce_with_report(r.value, focus);
    IterationStats st;
    st.iteration = i;
    st.nodes_unreduced = r.value.size();
    st.nodes = red.diagram.size();
    st.prefix_size = red.diagram.prefix().size();
    st.removed_edges = red.removed.size();
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.values.push_back(std::move(red.diagram));
    out.q_maps.push_back(std::move(r.q));
    out.stats.push_back(st);
  }
  if (options.greedy_q) {
    auto r = unreduced_backup(out.values.back(), d, unify);
    for (const auto& [name, q] : r.q) over_budget(q, "greedy Q(" + name + ")");
    out.greedy_q = std::move(r.q);
  }
  return out;
}

}  // namespace gfodd
