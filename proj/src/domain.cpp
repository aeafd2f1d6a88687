#include "gfodd/domain.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gfodd/apply.hpp"
#include "gfodd/error.hpp"
#include "gfodd/io.hpp"
#include "gfodd/sexpr.hpp"

namespace gfodd {

namespace {

// Inventory control. One truck moves between shops and a depot; an empty shop
// is restocked by unloading a loaded truck there. Customers empty each shop
// independently.
constexpr const char* kIcText = R"((domain ic
  (sorts shop truck depot (location shop depot))
  (predicates
    (empty shop :special)
    (tin truck location)
    (loaded truck))
  (constraints (functional tin))
  (action unload (params (t truck) (s shop))
    (variant done (prob 1)
      (tvd (empty y)
        (if (= y s)
          (if (empty y) (if (loaded t) (if (tin t s) 0 1) 1) 0)
          (if (empty y) 1 0)))
      (tvd (loaded u)
        (if (= u t) (if (tin t s) 0 (if (loaded u) 1 0)) (if (loaded u) 1 0)))))
  (action load (params (t truck) (d depot))
    (variant done (prob 1)
      (tvd (loaded u)
        (if (= u t) (if (tin t d) 1 (if (loaded u) 1 0)) (if (loaded u) 1 0)))))
  (action drive (params (t truck) (l location))
    (variant done (prob 1)
      (tvd (tin u m)
        (if (= u t) (if (= m l) 1 0) (if (tin u m) 1 0)))))
  (exogenous arrive (param (i shop))
    (variant succ (prob 2/5)
      (tvd (empty y) (if (= y i) 1 (if (empty y) 1 0))))
    (variant fail (prob 3/5)))
  (reward (agg (avg y shop)) (if (empty y) 0 1))
  (discount 9/10)
  (instance (scaled shop s) (fixed (t1 truck) (d1 depot)) (oracle-cap 6)))
)";

// Inventory control with three stock levels per shop and a per-shop
// consumption rate. Unloading refills a shop by one level.
constexpr const char* kAicText = R"((domain aic
  (sorts shop truck depot (location shop depot))
  (predicates
    (level0 shop :special)
    (level1 shop :special)
    (level2 shop :special)
    (rate3 shop)
    (rate4 shop)
    (tin truck location)
    (loaded truck))
  (constraints
    (exactly-one level0 level1 level2)
    (exactly-one rate3 rate4)
    (functional tin))
  (action unload (params (t truck) (s shop))
    (variant done (prob 1)
      (tvd (level0 y)
        (if (= y s)
          (if (loaded t) (if (tin t s) 0 (if (level0 s) 1 0)) (if (level0 s) 1 0))
          (if (level0 y) 1 0)))
      (tvd (level1 y)
        (if (= y s)
          (if (loaded t)
            (if (tin t s) (if (level0 s) 1 0) (if (level1 s) 1 0))
            (if (level1 s) 1 0))
          (if (level1 y) 1 0)))
      (tvd (level2 y)
        (if (= y s)
          (if (loaded t)
            (if (tin t s) (if (level0 s) 0 1) (if (level2 s) 1 0))
            (if (level2 s) 1 0))
          (if (level2 y) 1 0)))
      (tvd (loaded u)
        (if (= u t) (if (tin t s) 0 (if (loaded u) 1 0)) (if (loaded u) 1 0)))))
  (action load (params (t truck) (d depot))
    (variant done (prob 1)
      (tvd (loaded u)
        (if (= u t) (if (tin t d) 1 (if (loaded u) 1 0)) (if (loaded u) 1 0)))))
  (action drive (params (t truck) (l location))
    (variant done (prob 1)
      (tvd (tin u m)
        (if (= u t) (if (= m l) 1 0) (if (tin u m) 1 0)))))
  (exogenous consume (param (i shop))
    (variant succ (prob (if (rate3 i) 3/10 2/5))
      (tvd (level0 y) (if (= y i) (if (level2 y) 0 1) (if (level0 y) 1 0)))
      (tvd (level1 y) (if (= y i) (if (level2 y) 1 0) (if (level1 y) 1 0)))
      (tvd (level2 y) (if (= y i) 0 (if (level2 y) 1 0))))
    (variant fail (prob (if (rate3 i) 7/10 3/5))))
  (reward (agg (avg y shop)) (if (level1 y) 1/2 (if (level2 y) 1 0)))
  (discount 9/10)
  (instance (scaled shop s) (fixed (t1 truck) (d1 depot)) (oracle-cap 3)))
)";

const SExpr* find_section(const SExpr& e, std::string_view head) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i].has_head(head)) return &e[i];
  }
  return nullptr;
}

Variable typed(const SExpr& e, const Vocabulary& v) {
  if (!e.is_list || e.size() != 2) parse_fail(e, "expected (name sort)");
  Variable out{expect_atom(e[0], "name"), expect_atom(e[1], "sort")};
  if (!v.find_sort(out.sort)) parse_fail(e[1], "undeclared sort '" + out.sort + "'");
  return out;
}

void check_atoms(const Gfodd& f, const Vocabulary& v, const std::string& where) {
  for (const auto& n : f.nodes()) {
    if (n.is_leaf || n.atom.is_equality()) continue;
    const auto& a = n.atom;
    if (!v.find_predicate(a.predicate)) {
      throw VocabularyError(where + ": undeclared predicate '" + a.predicate + "'");
    }
    const auto& p = v.predicate(a.predicate);
    if (p.arity() != a.args.size()) {
      throw VocabularyError(where + ": " + to_string(a) + " expects " + std::to_string(p.arity()) + " arguments");
    }
    for (std::size_t k = 0; k < a.args.size(); ++k) {
      const auto& t = a.args[k];
      if (t.is_variable() && !v.is_subsort(t.sort, p.arg_sorts[k])) {
        throw VocabularyError(where + ": variable " + t.name + " of sort " + t.sort + " used as " + p.arg_sorts[k] +
                              " in " + to_string(a));
      }
    }
  }
}

void check_leaves(const Gfodd& f, bool zero_one, const std::string& where) {
  for (const auto& n : f.nodes()) {
    if (!n.is_leaf) continue;
    if (zero_one && n.value != 0 && n.value != 1) throw ValueError(where + ": TVD leaves must be 0 or 1");
    if (!zero_one && n.value > 1) throw ValueError(where + ": probability " + to_string(n.value) + " exceeds 1");
  }
}

ActionVariant parse_variant(const SExpr& e, const std::vector<Variable>& params, const Vocabulary& v,
                            const std::string& schema) {
  if (e.size() < 3) parse_fail(e, "expected (variant name (prob ...) (tvd ...)...)");
  ActionVariant out;
  out.name = expect_atom(e[1], "variant name");
  std::string where = schema + "/" + out.name;
  std::map<std::string, std::string> param_vars;
  for (const auto& p : params) param_vars[p.name] = p.sort;
  bool have_prob = false;
  for (std::size_t i = 2; i < e.size(); ++i) {
    const auto& item = e[i];
    if (item.has_head("prob")) {
      if (item.size() != 2) parse_fail(item, "expected (prob body)");
      out.prob = diagram_from_parts(params, {}, item[1], false);
      have_prob = true;
    } else if (item.has_head("tvd")) {
      if (item.size() != 3) parse_fail(item, "expected (tvd (pred vars...) body)");
      const auto& t = item[1];
      if (!t.is_list || t.items.empty()) parse_fail(t, "expected a target atom");
      auto pred = expect_atom(t[0], "predicate name");
      if (!v.find_predicate(pred)) parse_fail(t[0], "undeclared predicate '" + pred + "'");
      const auto& p = v.predicate(pred);
      if (p.arity() + 1 != t.size()) parse_fail(t, "wrong arity for '" + pred + "'");
      std::vector<Variable> free = params;
      Tvd tvd;
      tvd.target.predicate = pred;
      for (std::size_t k = 1; k < t.size(); ++k) {
        Variable var{expect_atom(t[k], "variable"), p.arg_sorts[k - 1]};
        for (const auto& f : free) {
          if (f.name == var.name) parse_fail(t[k], "target variable '" + var.name + "' is not fresh");
        }
        free.push_back(var);
        tvd.target.args.push_back(Term::variable(var));
      }
      if (out.find_tvd(pred)) parse_fail(item, "second TVD for '" + pred + "'");
      tvd.diagram = diagram_from_parts(free, {}, item[2], false);
      check_atoms(tvd.diagram, v, where);
      check_leaves(tvd.diagram, true, where + " " + to_string(tvd.target));
      out.tvds.push_back(std::move(tvd));
    } else {
      parse_fail(item, "expected (prob ...) or (tvd ...)");
    }
  }
  if (!have_prob) parse_fail(e, "variant without (prob ...)");
  check_atoms(out.prob, v, where);
  check_leaves(out.prob, false, where);
  return out;
}

void check_probabilities(const std::vector<ActionVariant>& variants, const std::string& schema) {
  if (variants.empty()) throw ModelError(schema + " has no variants");
  Gfodd sum = variants.front().prob;
  for (std::size_t i = 1; i < variants.size(); ++i) sum = apply_open(ApplyOp::Add, sum, variants[i].prob);
  if (!sum.is_constant() || sum.node(0).value != 1) {
    throw ModelError("variant probabilities of " + schema + " do not sum to 1");
  }
}

std::vector<Variable> parse_params(const SExpr& e, const Vocabulary& v) {
  std::vector<Variable> out;
  for (std::size_t i = 1; i < e.size(); ++i) {
    auto p = typed(e[i], v);
    for (const auto& q : out) {
      if (q.name == p.name) parse_fail(e[i], "duplicate parameter '" + p.name + "'");
    }
    out.push_back(p);
  }
  return out;
}

std::string target_text(const Atom& a) {
  std::string out = "(" + a.predicate;
  for (const auto& t : a.args) out += " " + t.name;
  return out + ")";
}

void write_variant(std::ostringstream& os, const ActionVariant& var) {
  os << "\n    (variant " << var.name << " (prob " << write_body(var.prob, 20) << ")";
  for (const auto& t : var.tvds) {
    os << "\n      (tvd " << target_text(t.target) << "\n        " << write_body(t.diagram, 8) << ")";
  }
  os << ")";
}

bool special(const Vocabulary& v, const Atom& a) {
  if (a.is_equality()) return false;
  auto i = v.find_predicate(a.predicate);
  return i && v.predicates()[*i].is_special;
}

void fail(AssumptionStatus& s, std::string issue) {
  s.holds = false;
  if (std::find(s.issues.begin(), s.issues.end(), issue) == s.issues.end()) s.issues.push_back(std::move(issue));
}

bool is_frame(const Gfodd& f, NodeId n, const Atom& target) {
  const Node& node = f.node(n);
  if (node.is_leaf || !(node.atom == target)) return false;
  const Node& t = f.node(node.true_child);
  const Node& e = f.node(node.false_child);
  return t.is_leaf && e.is_leaf && t.value == 1 && e.value == 0;
}

}  // namespace

const Tvd* ActionVariant::find_tvd(const std::string& predicate) const {
  for (const auto& t : tvds) {
    if (t.target.predicate == predicate) return &t;
  }
  return nullptr;
}

const ActionSchema& DomainSpec::action(const std::string& n) const {
  for (const auto& a : actions) {
    if (a.name == n) return a;
  }
  throw ArgumentError("unknown action '" + n + "'");
}

bool operator==(const DomainSpec& a, const DomainSpec& b) {
  return a.name == b.name && *a.vocab == *b.vocab && a.constraints == b.constraints && a.actions == b.actions &&
         a.exogenous == b.exogenous && a.reward == b.reward && a.discount == b.discount && a.instance == b.instance;
}

DomainSpec load_domain(std::string_view text) {
  auto e = parse_sexpr(text);
  if (!e.has_head("domain") || e.size() < 2) parse_fail(e, "expected (domain name ...)");
  DomainSpec d;
  d.name = expect_atom(e[1], "domain name");
  auto vocab = std::make_shared<Vocabulary>();

  const SExpr* sorts = find_section(e, "sorts");
  if (!sorts) parse_fail(e, "missing (sorts ...)");
  for (std::size_t i = 1; i < sorts->size(); ++i) {
    const auto& s = (*sorts)[i];
    try {
      if (!s.is_list) {
        vocab->add_sort({s.atom, {}});
      } else {
        if (s.size() < 2) parse_fail(s, "expected (union member...)");
        Sort u{expect_atom(s[0], "sort name"), {}};
        for (std::size_t k = 1; k < s.size(); ++k) u.members.push_back(expect_atom(s[k], "sort name"));
        vocab->add_sort(u);
      }
    } catch (const VocabularyError& err) {
      parse_fail(s, err.what());
    }
  }

  const SExpr* preds = find_section(e, "predicates");
  if (!preds) parse_fail(e, "missing (predicates ...)");
  for (std::size_t i = 1; i < preds->size(); ++i) {
    const auto& p = (*preds)[i];
    if (!p.is_list || p.items.empty()) parse_fail(p, "expected (name sort... [:special])");
    Predicate pr{expect_atom(p[0], "predicate name"), {}, false};
    for (std::size_t k = 1; k < p.size(); ++k) {
      const auto& s = expect_atom(p[k], "sort name");
      if (s == ":special") {
        pr.is_special = true;
      } else {
        if (!vocab->find_sort(s)) parse_fail(p[k], "undeclared sort '" + s + "'");
        pr.arg_sorts.push_back(s);
      }
    }
    if (pr.is_special && pr.arity() != 1) parse_fail(p, "special predicates must be unary");
    try {
      vocab->add_predicate(pr);
    } catch (const VocabularyError& err) {
      parse_fail(p, err.what());
    }
  }
  d.vocab = vocab;
  const Vocabulary& v = *vocab;

  if (const SExpr* cs = find_section(e, "constraints")) {
    for (std::size_t i = 1; i < cs->size(); ++i) {
      const auto& c = (*cs)[i];
      Constraint con;
      if (c.has_head("functional")) {
        con.kind = Constraint::Kind::Functional;
        if (c.size() != 2) parse_fail(c, "expected (functional pred)");
      } else if (c.has_head("exactly-one")) {
        con.kind = Constraint::Kind::ExactlyOne;
        if (c.size() < 3) parse_fail(c, "expected (exactly-one pred pred...)");
      } else {
        parse_fail(c, "unknown constraint");
      }
      for (std::size_t k = 1; k < c.size(); ++k) {
        auto name = expect_atom(c[k], "predicate name");
        if (!v.find_predicate(name)) parse_fail(c[k], "undeclared predicate '" + name + "'");
        const auto& p = v.predicate(name);
        if (con.kind == Constraint::Kind::Functional && p.arity() != 2) parse_fail(c[k], "functional needs a binary predicate");
        if (con.kind == Constraint::Kind::ExactlyOne) {
          if (p.arity() != 1) parse_fail(c[k], "exactly-one needs unary predicates");
          if (!con.predicates.empty() && v.predicate(con.predicates[0]).arg_sorts != p.arg_sorts) {
            parse_fail(c[k], "exactly-one predicates must share a sort");
          }
        }
        con.predicates.push_back(name);
      }
      d.constraints.push_back(con);
    }
  }

  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto& item = e[i];
    if (item.has_head("action")) {
      if (item.size() < 4) parse_fail(item, "expected (action name (params ...) (variant ...)...)");
      ActionSchema a;
      a.name = expect_atom(item[1], "action name");
      for (const auto& other : d.actions) {
        if (other.name == a.name) parse_fail(item, "duplicate action '" + a.name + "'");
      }
      if (!item[2].has_head("params")) parse_fail(item[2], "expected (params ...)");
      a.params = parse_params(item[2], v);
      for (std::size_t k = 3; k < item.size(); ++k) {
        if (!item[k].has_head("variant")) parse_fail(item[k], "expected (variant ...)");
        a.variants.push_back(parse_variant(item[k], a.params, v, a.name));
      }
      check_probabilities(a.variants, a.name);
      d.actions.push_back(std::move(a));
    } else if (item.has_head("exogenous")) {
      if (d.exogenous) parse_fail(item, "more than one exogenous schema");
      if (item.size() < 4) parse_fail(item, "expected (exogenous name (param (i sort)) (variant ...)...)");
      ExogenousSchema x;
      x.name = expect_atom(item[1], "event name");
      if (!item[2].has_head("param") || item[2].size() != 2) parse_fail(item[2], "expected (param (name sort))");
      x.param = typed(item[2][1], v);
      for (std::size_t k = 3; k < item.size(); ++k) {
        if (!item[k].has_head("variant")) parse_fail(item[k], "expected (variant ...)");
        x.variants.push_back(parse_variant(item[k], {x.param}, v, x.name));
      }
      check_probabilities(x.variants, x.name);
      d.exogenous = std::move(x);
    }
  }
  if (d.actions.empty()) parse_fail(e, "domain has no actions");

  const SExpr* reward = find_section(e, "reward");
  if (!reward) parse_fail(e, "missing (reward ...)");
  {
    Prefix prefix;
    const SExpr* body = nullptr;
    for (std::size_t i = 1; i < reward->size(); ++i) {
      if ((*reward)[i].has_head("agg")) {
        prefix = parse_prefix((*reward)[i]);
      } else {
        if (body) parse_fail((*reward)[i], "more than one reward body");
        body = &(*reward)[i];
      }
    }
    if (!body) parse_fail(*reward, "missing reward body");
    for (const auto& p : prefix) {
      if (!v.find_sort(p.var.sort)) parse_fail(*reward, "undeclared sort '" + p.var.sort + "'");
    }
    d.reward = diagram_from_parts({}, prefix, *body, false);
    check_atoms(d.reward, v, "reward");
  }

  if (const SExpr* disc = find_section(e, "discount")) {
    if (disc->size() != 2) parse_fail(*disc, "expected (discount value)");
    try {
      d.discount = parse_rational(expect_atom((*disc)[1], "discount"));
    } catch (const ArgumentError&) {
      parse_fail((*disc)[1], "bad discount");
    }
    if (d.discount <= 0 || d.discount >= 1) throw ValueError("discount must lie in (0, 1)");
  }

  const SExpr* inst = find_section(e, "instance");
  if (!inst) parse_fail(e, "missing (instance ...)");
  for (std::size_t i = 1; i < inst->size(); ++i) {
    const auto& item = (*inst)[i];
    if (item.has_head("scaled")) {
      if (item.size() != 3) parse_fail(item, "expected (scaled sort prefix)");
      d.instance.scaled_sort = expect_atom(item[1], "sort");
      d.instance.name_prefix = expect_atom(item[2], "name prefix");
      if (!v.find_sort(d.instance.scaled_sort)) parse_fail(item[1], "undeclared sort");
    } else if (item.has_head("fixed")) {
      for (std::size_t k = 1; k < item.size(); ++k) {
        auto o = typed(item[k], v);
        d.instance.fixed.push_back({o.name, o.sort});
      }
    } else if (item.has_head("oracle-cap")) {
      if (item.size() != 2) parse_fail(item, "expected (oracle-cap n)");
      try {
        d.instance.oracle_cap = std::stoi(expect_atom(item[1], "cap"));
      } catch (const std::logic_error&) {
        parse_fail(item[1], "bad cap");
      }
    } else {
      parse_fail(item, "unknown instance item");
    }
  }
  if (d.instance.scaled_sort.empty()) parse_fail(*inst, "missing (scaled sort prefix)");
  return d;
}

std::string save_domain(const DomainSpec& d) {
  const Vocabulary& v = *d.vocab;
  std::ostringstream os;
  os << "(domain " << d.name << "\n  (sorts";
  for (const auto& s : v.sorts()) {
    if (s.members.empty()) {
      os << " " << s.name;
    } else {
      os << " (" << s.name;
      for (const auto& m : s.members) os << " " << m;
      os << ")";
    }
  }
  os << ")\n  (predicates";
  for (const auto& p : v.predicates()) {
    os << "\n    (" << p.name;
    for (const auto& s : p.arg_sorts) os << " " << s;
    if (p.is_special) os << " :special";
    os << ")";
  }
  os << ")";
  if (!d.constraints.empty()) {
    os << "\n  (constraints";
    for (const auto& c : d.constraints) {
      os << " (" << (c.kind == Constraint::Kind::Functional ? "functional" : "exactly-one");
      for (const auto& p : c.predicates) os << " " << p;
      os << ")";
    }
    os << ")";
  }
  for (const auto& a : d.actions) {
    os << "\n  (action " << a.name << " (params";
    for (const auto& p : a.params) os << " (" << p.name << " " << p.sort << ")";
    os << ")";
    for (const auto& var : a.variants) write_variant(os, var);
    os << ")";
  }
  if (d.exogenous) {
    const auto& x = *d.exogenous;
    os << "\n  (exogenous " << x.name << " (param (" << x.param.name << " " << x.param.sort << "))";
    for (const auto& var : x.variants) write_variant(os, var);
    os << ")";
  }
  os << "\n  (reward " << write_prefix(d.reward.prefix()) << "\n    " << write_body(d.reward, 4) << ")";
  os << "\n  (discount " << to_string(d.discount) << ")";
  os << "\n  (instance (scaled " << d.instance.scaled_sort << " " << d.instance.name_prefix << ") (fixed";
  for (const auto& o : d.instance.fixed) os << " (" << o.name << " " << o.sort << ")";
  os << ") (oracle-cap " << d.instance.oracle_cap << ")))\n";
  return os.str();
}

std::string builtin_domain_text(const std::string& name) {
  if (name == "ic") return kIcText;
  if (name == "aic") return kAicText;
  throw ArgumentError("unknown builtin domain '" + name + "' (expected ic or aic)");
}

DomainSpec builtin_domain(const std::string& name, std::optional<Rational> discount) {
  DomainSpec d = load_domain(builtin_domain_text(name));
  if (discount) {
    if (*discount <= 0 || *discount >= 1) throw ArgumentError("discount must lie in (0, 1)");
    d.discount = *discount;
  }
  return d;
}

DomainSpec resolve_domain(const std::string& name_or_path) {
  if (name_or_path == "ic" || name_or_path == "aic") return builtin_domain(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ArgumentError("no builtin domain or readable file named '" + name_or_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_domain(ss.str());
}

// ---------------------------------------------------------------------------

bool AssumptionReport::all_hold() const {
  return std::all_of(items.begin(), items.end(), [](const AssumptionStatus& s) { return s.holds; });
}

AssumptionReport check_assumptions(const DomainSpec& d) {
  const Vocabulary& v = *d.vocab;
  AssumptionReport r;
  auto& a1 = r.items[0];
  auto& a2 = r.items[1];
  auto& a3 = r.items[2];
  auto& a4 = r.items[3];

  if (!d.exogenous) {
    fail(a1, "no exogenous event schema");
  } else {
    const auto& x = *d.exogenous;
    Term i = Term::variable(x.param);
    for (const auto& var : x.variants) {
      for (const auto& t : var.tvds) {
        std::string where = x.name + "/" + var.name + " " + to_string(t.target);
        const auto& p = v.predicate(t.target.predicate);
        if (!p.is_special || p.arity() != 1) fail(a2, where + " changes a predicate that is not unary special");
        if (t.target.args.size() != 1) {
          fail(a1, where + " is not object-centered");
          continue;
        }
        const Node& root = t.diagram.node(0);
        Atom eq = Atom::equality(i, t.target.args[0]);
        Atom eq2 = Atom::equality(t.target.args[0], i);
        if (root.is_leaf || !(root.atom == eq || root.atom == eq2)) {
          fail(a1, where + " is not rooted at the test " + to_string(eq));
        } else if (!is_frame(t.diagram, root.false_child, t.target)) {
          fail(a1, where + " changes objects other than " + i.name);
        }
      }
    }
  }

  for (const auto& a : d.actions) {
    for (const auto& var : a.variants) {
      for (const auto& n : var.prob.nodes()) {
        if (!n.is_leaf && special(v, n.atom)) {
          fail(a3, a.name + "/" + var.name + " probability tests " + to_string(n.atom));
        }
      }
      for (const auto& t : var.tvds) {
        for (const auto& n : t.diagram.nodes()) {
          if (n.is_leaf || !special(v, n.atom) || n.atom == t.target) continue;
          fail(a3, a.name + "/" + var.name + " " + to_string(t.target) + " tests " + to_string(n.atom));
        }
      }
    }
  }

  if (!is_a4(d.reward)) {
    fail(a4, "reward prefix " + write_prefix(d.reward.prefix()) + " is not max* avg");
  } else {
    const auto& y = d.reward.prefix().back().var;
    for (const auto& n : d.reward.nodes()) {
      if (n.is_leaf || !special(v, n.atom)) continue;
      if (n.atom.args.size() != 1 || !n.atom.args[0].is_variable() || n.atom.args[0].name != y.name) {
        fail(a4, "reward tests " + to_string(n.atom) + " on a term other than " + y.name);
      }
    }
  }
  return r;
}

std::string to_string(const AssumptionReport& r) {
  std::string out;
  for (int k = 1; k <= 4; ++k) {
    const auto& s = r.a(k);
    out += "A" + std::to_string(k) + (s.holds ? " holds\n" : " violated\n");
    for (const auto& issue : s.issues) out += "  " + issue + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Universe> instance_universe(const DomainSpec& d, int n) {
  if (n < 0) throw ArgumentError("instance size must be non-negative");
  std::vector<Object> objects;
  for (int k = 1; k <= n; ++k) objects.push_back({d.instance.name_prefix + std::to_string(k), d.instance.scaled_sort});
  for (const auto& o : d.instance.fixed) objects.push_back(o);
  return std::make_shared<const Universe>(d.vocab, std::move(objects));
}

std::vector<StateSlot> state_slots(const DomainSpec& d, const Universe& u) {
  const Vocabulary& v = *d.vocab;
  std::map<std::string, const Constraint*> owner;
  for (const auto& c : d.constraints) {
    for (const auto& p : c.predicates) owner[p] = &c;
  }
  std::vector<StateSlot> out;
  for (std::size_t pi = 0; pi < v.predicates().size(); ++pi) {
    const auto& p = v.predicates()[pi];
    auto it = owner.find(p.name);
    if (it == owner.end()) {
      // One binary slot per ground tuple, first argument slowest.
      std::vector<Variable> vars;
      for (std::size_t k = 0; k < p.arity(); ++k) vars.push_back({"_" + std::to_string(k), p.arg_sorts[k]});
      std::vector<int> objs(p.arity());
      std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == p.arity()) {
          out.push_back({{u.fact_slot(pi, objs)}, true});
          return;
        }
        for (int o : u.objects_of(p.arg_sorts[k])) {
          objs[k] = o;
          rec(k + 1);
        }
      };
      rec(0);
      continue;
    }
    const Constraint& c = *it->second;
    if (c.kind == Constraint::Kind::Functional) {
      for (int a : u.objects_of(p.arg_sorts[0])) {
        StateSlot s;
        for (int b : u.objects_of(p.arg_sorts[1])) {
          int objs[2] = {a, b};
          s.fact_slots.push_back(u.fact_slot(pi, objs));
        }
        if (s.fact_slots.empty()) throw EmptyDomainError("no objects of sort " + p.arg_sorts[1] + " for " + p.name);
        out.push_back(std::move(s));
      }
    } else if (c.predicates.front() == p.name) {
      for (int o : u.objects_of(p.arg_sorts[0])) {
        StateSlot s;
        for (const auto& q : c.predicates) {
          int objs[1] = {o};
          s.fact_slots.push_back(u.fact_slot(*v.find_predicate(q), objs));
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::uint64_t state_count(const DomainSpec& d, int n) {
  auto u = instance_universe(d, n);
  std::uint64_t count = 1;
  for (const auto& s : state_slots(d, *u)) count *= s.arity();
  return count;
}

Interpretation state_from_choices(const std::shared_ptr<const Universe>& u, const std::vector<StateSlot>& slots,
                                  const std::vector<int>& choices) {
  if (choices.size() != slots.size()) throw ArgumentError("choice vector does not match the state slots");
  Interpretation s(u);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const auto& slot = slots[k];
    if (slot.binary) {
      s.set_slot(slot.fact_slots[0], choices[k] != 0);
    } else {
      s.set_slot(slot.fact_slots.at(static_cast<std::size_t>(choices[k])), true);
    }
  }
  return s;
}

std::vector<Interpretation> enumerate_states(const DomainSpec& d, int n) {
  if (n < 1) throw EmptyDomainError("instances need at least one object of sort " + d.instance.scaled_sort);
  auto u = instance_universe(d, n);
  auto slots = state_slots(d, *u);
  std::vector<Interpretation> out;
  std::vector<int> choice(slots.size(), 0);
  while (true) {
    out.push_back(state_from_choices(u, slots, choice));
    std::size_t k = slots.size();
    while (k > 0) {
      --k;
      if (++choice[k] < static_cast<int>(slots[k].arity())) break;
      choice[k] = 0;
      if (k == 0) return out;
    }
    if (slots.empty()) return out;
  }
}

bool is_consistent(const DomainSpec& d, const Interpretation& s) {
  const auto& u = s.universe();
  const auto& v = u.vocabulary();
  for (const auto& c : d.constraints) {
    const auto& first = v.predicate(c.predicates.front());
    if (c.kind == Constraint::Kind::ExactlyOne) {
      for (int o : u.objects_of(first.arg_sorts[0])) {
        int count = 0;
        for (const auto& q : c.predicates) {
          int objs[1] = {o};
          count += s.holds(*v.find_predicate(q), objs) ? 1 : 0;
        }
        if (count != 1) return false;
      }
    } else {
      std::size_t pi = *v.find_predicate(first.name);
      for (int a : u.objects_of(first.arg_sorts[0])) {
        int count = 0;
        for (int b : u.objects_of(first.arg_sorts[1])) {
          int objs[2] = {a, b};
          count += s.holds(pi, objs) ? 1 : 0;
        }
        if (count != 1) return false;
      }
    }
  }
  return true;
}

std::vector<Interpretation> all_focus_states(const DomainSpec& d, int shops) { return enumerate_states(d, shops); }

}  // namespace gfodd
