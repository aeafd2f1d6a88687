#include "gfodd/diagram.hpp"

#include <algorithm>
#include <unordered_map>

#include "gfodd/detail/builder.hpp"
#include "gfodd/error.hpp"

namespace gfodd {

const char* to_string(Aggregator a) { return a == Aggregator::Max ? "max" : "avg"; }

std::string to_string(const EdgeId& e) { return std::to_string(e.node) + (e.branch ? "t" : "f"); }

EdgeSet::EdgeSet(std::initializer_list<EdgeId> edges) {
  for (const auto& e : edges) insert(e);
}

void EdgeSet::insert(EdgeId e) {
  auto c = e.code();
  auto it = std::lower_bound(codes_.begin(), codes_.end(), c);
  if (it == codes_.end() || *it != c) codes_.insert(it, c);
}

void EdgeSet::insert_all(const EdgeSet& other) {
  if (other.codes_.empty()) return;
  if (codes_.empty()) {
    codes_ = other.codes_;
    return;
  }
  std::vector<std::uint32_t> merged;
  merged.reserve(codes_.size() + other.codes_.size());
  std::set_union(codes_.begin(), codes_.end(), other.codes_.begin(), other.codes_.end(), std::back_inserter(merged));
  codes_ = std::move(merged);
}

bool EdgeSet::contains(EdgeId e) const { return std::binary_search(codes_.begin(), codes_.end(), e.code()); }

std::vector<EdgeId> EdgeSet::edges() const {
  std::vector<EdgeId> out;
  out.reserve(codes_.size());
  for (auto c : codes_) out.push_back(EdgeId::from_code(c));
  return out;
}

std::string to_string(const EdgeSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& e : s.edges()) {
    if (!first) out += ",";
    out += to_string(e);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

Gfodd::Gfodd() { nodes_.push_back(Node{}); }

std::size_t Gfodd::internal_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.is_leaf; }));
}

int Gfodd::prefix_index(const std::string& var_name) const {
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (prefix_[i].var.name == var_name) return static_cast<int>(i);
  }
  return -1;
}

std::set<std::string> Gfodd::used_variables() const {
  std::set<std::string> out;
  for (const auto& n : nodes_) {
    if (n.is_leaf) continue;
    for (const auto& t : n.atom.args) {
      if (t.is_variable()) out.insert(t.name);
    }
  }
  return out;
}

std::vector<Variable> Gfodd::order_variables() const {
  std::vector<Variable> out = free_;
  for (const auto& e : prefix_) out.push_back(e.var);
  return out;
}

std::set<Term> Gfodd::constants() const {
  std::set<Term> out;
  for (const auto& n : nodes_) {
    if (n.is_leaf) continue;
    for (const auto& t : n.atom.args) {
      if (t.is_constant()) out.insert(t);
    }
  }
  return out;
}

ExprPtr Expr::leaf(Rational v) {
  auto e = std::make_shared<Expr>();
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::ite(Atom a, ExprPtr t, ExprPtr e) {
  auto x = std::make_shared<Expr>();
  x->is_leaf = false;
  x->atom = std::move(a);
  x->then_branch = std::move(t);
  x->else_branch = std::move(e);
  return x;
}

// ---------------------------------------------------------------------------

OrderContext::OrderContext(const std::vector<Variable>& order) {
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!index_.emplace(order[i].name, static_cast<int>(i)).second) {
      throw ConstructionError("variable '" + order[i].name + "' declared twice");
    }
  }
}

namespace {

std::vector<Variable> concat(const std::vector<Variable>& free, const Prefix& prefix) {
  std::vector<Variable> out = free;
  for (const auto& e : prefix) out.push_back(e.var);
  return out;
}

}  // namespace

OrderContext::OrderContext(const std::vector<Variable>& free, const Prefix& prefix)
    : OrderContext(concat(free, prefix)) {}

int OrderContext::index(const std::string& var) const {
  auto it = index_.find(var);
  if (it == index_.end()) throw ConstructionError("undeclared variable '" + var + "'");
  return it->second;
}

namespace {

std::strong_ordering term_order(const Term& a, const Term& b, const OrderContext& ctx) {
  if (a.is_variable() != b.is_variable()) return a.is_variable() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.is_variable()) return ctx.index(a.name) <=> ctx.index(b.name);
  int c = a.name.compare(b.name);
  return c <=> 0;
}

std::vector<Term> oriented_args(const Atom& a, const OrderContext& ctx) {
  std::vector<Term> args = a.args;
  if (a.is_equality() && args.size() == 2 && term_order(args[0], args[1], ctx) < 0) std::swap(args[0], args[1]);
  return args;
}

}  // namespace

std::strong_ordering atom_order(const Atom& a, const Atom& b, const OrderContext& ctx) {
  bool ae = a.is_equality();
  bool be = b.is_equality();
  if (ae != be) return ae ? std::strong_ordering::less : std::strong_ordering::greater;
  if (!ae) {
    int c = a.predicate.compare(b.predicate);
    if (c != 0) return c <=> 0;
  }
  auto x = oriented_args(a, ctx);
  auto y = oriented_args(b, ctx);
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = term_order(x[i], y[i], ctx);
    if (c != 0) return c;
  }
  return x.size() <=> y.size();
}

namespace {

void check_names(const std::vector<Variable>& free, const Prefix& prefix) {
  (void)OrderContext(free, prefix);  // duplicate check
}

DiagramBuilder::Ref build_expr(DiagramBuilder& b, const ExprPtr& e, bool strict,
                               std::unordered_map<const Expr*, DiagramBuilder::Ref>& memo) {
  if (!e) throw ConstructionError("missing sub-expression");
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  DiagramBuilder::Ref r;
  if (e->is_leaf) {
    if (e->value < 0) throw ValueError("negative leaf value " + to_string(e->value));
    r = b.leaf(e->value);
  } else {
    auto t = build_expr(b, e->then_branch, strict, memo);
    auto f = build_expr(b, e->else_branch, strict, memo);
    r = strict ? b.node_checked(e->atom, t, f) : b.ite_atom(e->atom, t, f);
  }
  memo.emplace(e.get(), r);
  return r;
}

Gfodd build_impl(const Prefix& prefix, const ExprPtr& expr, const std::vector<Variable>& free, bool strict) {
  check_names(free, prefix);
  DiagramBuilder b(concat(free, prefix));
  std::unordered_map<const Expr*, DiagramBuilder::Ref> memo;
  auto root = build_expr(b, expr, strict, memo);
  return b.finish(free, prefix, root, false);
}

}  // namespace

Gfodd build(const Prefix& prefix, const ExprPtr& expr, const std::vector<Variable>& free) {
  return build_impl(prefix, expr, free, true);
}

Gfodd build_sorted(const Prefix& prefix, const ExprPtr& expr, const std::vector<Variable>& free) {
  return build_impl(prefix, expr, free, false);
}

Gfodd rebuild(const Gfodd& f, const std::map<Term, Term>& renaming, const std::vector<Variable>& free,
              const Prefix& prefix, bool prune) {
  check_names(free, prefix);
  DiagramBuilder b(concat(free, prefix));
  auto root = b.import(f, renaming);
  return b.finish(free, prefix, root, prune);
}

Gfodd normalize(const Gfodd& f) { return rebuild(f, {}, f.free_vars(), f.prefix(), true); }

bool is_ordered(const Gfodd& f) {
  OrderContext ctx(f.free_vars(), f.prefix());
  for (const auto& n : f.nodes()) {
    if (n.is_leaf) continue;
    for (NodeId c : {n.true_child, n.false_child}) {
      const Node& child = f.node(c);
      if (!child.is_leaf && atom_order(n.atom, child.atom, ctx) >= 0) return false;
    }
  }
  return true;
}

std::set<std::string> used_names(const Gfodd& f) {
  std::set<std::string> out;
  for (const auto& v : f.free_vars()) out.insert(v.name);
  for (const auto& e : f.prefix()) out.insert(e.var.name);
  for (const auto& n : f.nodes()) {
    if (n.is_leaf) continue;
    for (const auto& t : n.atom.args) out.insert(t.name);
  }
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  std::string stem = base;
  auto pos = stem.rfind('_');
  if (pos != std::string::npos && pos + 1 < stem.size() &&
      std::all_of(stem.begin() + static_cast<long>(pos) + 1, stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    stem.resize(pos);
  }
  if (!used.count(stem)) return stem;
  for (int k = 1;; ++k) {
    std::string candidate = stem + "_" + std::to_string(k);
    if (!used.count(candidate)) return candidate;
  }
}

std::pair<Gfodd, Gfodd> standardize_apart(const Gfodd& f, const Gfodd& g) {
  auto f_names = used_names(f);
  auto used = f_names;
  for (const auto& n : used_names(g)) used.insert(n);
  std::map<Term, Term> renaming;
  Prefix prefix;
  for (const auto& e : g.prefix()) {
    PrefixEntry ne = e;
    if (f_names.count(e.var.name)) {
      ne.var.name = fresh_name(e.var.name, used);
      used.insert(ne.var.name);
      renaming.emplace(Term::variable(e.var), Term::variable(ne.var));
    }
    prefix.push_back(ne);
  }
  if (renaming.empty()) return {f, g};
  return {f, rebuild(g, renaming, g.free_vars(), prefix)};
}

Gfodd bind_variable(const Gfodd& f, const std::string& var, const Term& c) {
  int idx = f.prefix_index(var);
  if (idx < 0) throw ArgumentError("'" + var + "' is not a prefix variable");
  const auto& v = f.prefix()[static_cast<std::size_t>(idx)].var;
  if (!c.is_constant()) throw ArgumentError("binding target must be a constant");
  if (!c.sort.empty() && !v.sort.empty() && c.sort != v.sort) {
    throw ArgumentError("constant '" + c.name + "' of sort " + c.sort + " cannot bind " + var + ":" + v.sort);
  }
  Prefix prefix = f.prefix();
  prefix.erase(prefix.begin() + idx);
  Term ct = c;
  if (ct.sort.empty()) ct.sort = v.sort;
  return rebuild(f, {{Term::variable(v), ct}}, f.free_vars(), prefix);
}

Gfodd lift_constant(const Gfodd& f, const Term& c, const Variable& v, Aggregator agg, std::size_t position) {
  if (!f.constants().count(c)) throw ArgumentError("constant '" + c.name + "' does not occur in the diagram");
  if (used_names(f).count(v.name)) throw ArgumentError("variable name '" + v.name + "' already in use");
  if (position > f.prefix().size()) throw ArgumentError("prefix position out of range");
  Prefix prefix = f.prefix();
  prefix.insert(prefix.begin() + static_cast<long>(position), PrefixEntry{v, agg});
  return rebuild(f, {{Term::constant(c.name), Term::variable(v)}}, f.free_vars(), prefix);
}

}  // namespace gfodd
