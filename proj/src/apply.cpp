#include "gfodd/apply.hpp"

#include "gfodd/error.hpp"
#include "gfodd/io.hpp"

namespace gfodd {

namespace {

void merge_vars(std::vector<Variable>& into, const std::vector<Variable>& from) {
  for (const auto& v : from) {
    bool found = false;
    for (const auto& w : into) {
      if (w.name != v.name) continue;
      if (w.sort != v.sort) throw FormError("variable '" + v.name + "' used with sorts " + w.sort + " and " + v.sort);
      found = true;
    }
    if (!found) into.push_back(v);
  }
}

std::vector<Variable> order_of(const std::vector<Variable>& free, const Prefix& prefix) {
  std::vector<Variable> out = free;
  for (const auto& e : prefix) out.push_back(e.var);
  return out;
}

Gfodd combine(ApplyOp op, const Gfodd& f, const Gfodd& g, const std::map<Term, Term>& g_renaming,
              const std::vector<Variable>& free, const Prefix& prefix) {
  DiagramBuilder b(order_of(free, prefix));
  auto a = b.import(f);
  auto c = b.import(g, g_renaming);
  return b.finish(free, prefix, b.apply(op, a, c), true);
}

void require_a4(const Gfodd& f, const char* what) {
  if (!is_a4(f)) throw FormError(std::string(what) + " requires a max* avg prefix, got " + write_prefix(f.prefix()));
}

}  // namespace

Gfodd apply_open(ApplyOp op, const Gfodd& f, const Gfodd& g) {
  std::vector<Variable> free = f.free_vars();
  merge_vars(free, g.free_vars());
  Prefix prefix = f.prefix();
  for (const auto& e : g.prefix()) {
    bool found = false;
    for (const auto& p : prefix) {
      if (p.var.name != e.var.name) continue;
      if (p.var.sort != e.var.sort) throw FormError("variable '" + e.var.name + "' used with two sorts");
      found = true;
    }
    for (const auto& v : free) {
      if (v.name == e.var.name) throw FormError("variable '" + e.var.name + "' is free in one operand only");
    }
    if (!found) prefix.push_back(e);
  }
  return combine(op, f, g, {}, free, prefix);
}

Gfodd scale(const Gfodd& f, const Rational& c) {
  if (c < 0) throw ValueError("negative scale factor " + to_string(c));
  DiagramBuilder b(f.order_variables());
  auto r = b.scale(b.import(f), c);
  return b.finish(f.free_vars(), f.prefix(), r, true);
}

bool is_a4(const Prefix& p) {
  if (p.empty() || p.back().agg != Aggregator::Avg) return false;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i].agg != Aggregator::Max) return false;
  }
  return true;
}

Gfodd as_a4(const Gfodd& f, const std::string& avg_sort) {
  if (is_a4(f)) return f;
  for (const auto& e : f.prefix()) {
    if (e.agg == Aggregator::Avg) throw FormError("prefix is not of the form max* avg: " + write_prefix(f.prefix()));
  }
  Prefix prefix = f.prefix();
  prefix.push_back({{fresh_name("y", used_names(f)), avg_sort}, Aggregator::Avg});
  return rebuild(f, {}, f.free_vars(), prefix);
}

Gfodd add_shared_avg(const Gfodd& f, const Gfodd& g) {
  require_a4(f, "add_shared_avg");
  require_a4(g, "add_shared_avg");
  const auto& y = f.prefix().back().var;
  const auto& gy = g.prefix().back().var;
  if (y.sort != gy.sort) throw FormError("average variables range over different sorts");
  auto used = used_names(f);
  for (const auto& n : used_names(g)) used.insert(n);
  std::map<Term, Term> renaming;
  Prefix prefix(f.prefix().begin(), f.prefix().end() - 1);
  for (std::size_t i = 0; i + 1 < g.prefix().size(); ++i) {
    Variable v = g.prefix()[i].var;
    std::string name = fresh_name(v.name, used);
    used.insert(name);
    renaming.emplace(Term::variable(v), Term::variable(name, v.sort));
    prefix.push_back({{name, v.sort}, Aggregator::Max});
  }
  renaming.emplace(Term::variable(gy), Term::variable(y));
  prefix.push_back(f.prefix().back());
  std::vector<Variable> free = f.free_vars();
  merge_vars(free, g.free_vars());
  return combine(ApplyOp::Add, f, g, renaming, free, prefix);
}

Gfodd max_expr(const Gfodd& f, const Gfodd& g, std::optional<std::string> z_sort) {
  require_a4(f, "max_expr");
  require_a4(g, "max_expr");
  const auto& y = f.prefix().back().var;
  const auto& gy = g.prefix().back().var;
  if (y.sort != gy.sort) throw FormError("average variables range over different sorts");
  std::string zs = z_sort ? *z_sort : y.sort;

  auto used = used_names(f);
  for (const auto& n : used_names(g)) used.insert(n);
  std::string z1 = fresh_name("z", used);
  used.insert(z1);
  std::string z2 = fresh_name("z", used);
  used.insert(z2);

  Prefix prefix{{{z1, zs}, Aggregator::Max}, {{z2, zs}, Aggregator::Max}};
  std::vector<bool> taken(f.prefix().size(), false);
  for (std::size_t i = 0; i + 1 < f.prefix().size(); ++i) prefix.push_back(f.prefix()[i]);
  std::map<Term, Term> renaming;
  for (std::size_t i = 0; i + 1 < g.prefix().size(); ++i) {
    const Variable& v = g.prefix()[i].var;
    std::string target;
    for (std::size_t k = 0; k + 1 < f.prefix().size(); ++k) {
      if (!taken[k] && f.prefix()[k].var.sort == v.sort) {
        taken[k] = true;
        target = f.prefix()[k].var.name;
        break;
      }
    }
    if (target.empty()) {
      target = fresh_name(v.name, used);
      used.insert(target);
      prefix.push_back({{target, v.sort}, Aggregator::Max});
    }
    renaming.emplace(Term::variable(v), Term::variable(target, v.sort));
  }
  renaming.emplace(Term::variable(gy), Term::variable(y));
  prefix.push_back(f.prefix().back());

  std::vector<Variable> free = f.free_vars();
  merge_vars(free, g.free_vars());
  DiagramBuilder b(order_of(free, prefix));
  auto a = b.import(f);
  auto c = b.import(g, renaming);
  auto root = b.ite_atom(Atom::equality(Term::variable(z1, zs), Term::variable(z2, zs)), a, c);
  return b.finish(free, prefix, root, true);
}

}  // namespace gfodd
