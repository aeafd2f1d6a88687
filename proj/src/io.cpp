#include "gfodd/io.hpp"

#include <functional>
#include <sstream>
#include <unordered_map>

#include "gfodd/detail/builder.hpp"
#include "gfodd/error.hpp"

namespace gfodd {

namespace {

Variable parse_typed(const SExpr& e) {
  if (!e.is_list || e.size() != 2) parse_fail(e, "expected (name sort)");
  return {expect_atom(e[0], "variable name"), expect_atom(e[1], "sort name")};
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  char c = s[0];
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

Rational parse_leaf(const SExpr& e) {
  const auto& s = expect_atom(e, "leaf value");
  try {
    return parse_rational(s);
  } catch (const ArgumentError&) {
    parse_fail(e, "bad leaf value '" + s + "'");
  }
}

std::string atom_text(const Atom& a) {
  std::string out = "(" + a.predicate;
  for (const auto& t : a.args) out += " " + t.name;
  return out + ")";
}

}  // namespace

Prefix parse_prefix(const SExpr& agg) {
  if (!agg.has_head("agg")) parse_fail(agg, "expected (agg ...)");
  Prefix out;
  for (std::size_t i = 1; i < agg.size(); ++i) {
    const auto& item = agg[i];
    if (!item.is_list || item.size() != 3) parse_fail(item, "expected (max|avg name sort)");
    const auto& kw = expect_atom(item[0], "aggregator");
    Aggregator a;
    if (kw == "max") {
      a = Aggregator::Max;
    } else if (kw == "avg") {
      a = Aggregator::Avg;
    } else {
      parse_fail(item[0], "unknown aggregator '" + kw + "'");
    }
    out.push_back({{expect_atom(item[1], "variable name"), expect_atom(item[2], "sort name")}, a});
  }
  return out;
}

Atom parse_atom(const SExpr& e, const std::map<std::string, std::string>& vars) {
  if (!e.is_list || e.items.empty()) parse_fail(e, "expected an atom");
  Atom a;
  a.predicate = expect_atom(e[0], "predicate name");
  if (looks_numeric(a.predicate)) parse_fail(e[0], "bad predicate name '" + a.predicate + "'");
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto& name = expect_atom(e[i], "term");
    auto it = vars.find(name);
    a.args.push_back(it != vars.end() ? Term::variable(name, it->second) : Term::constant(name));
  }
  if (a.is_equality() && a.args.size() != 2) parse_fail(e, "equality takes two terms");
  return a;
}

ExprPtr parse_body(const SExpr& e, const std::map<std::string, std::string>& vars) {
  if (!e.is_list) return Expr::leaf(parse_leaf(e));
  if (!e.has_head("if")) parse_fail(e, "expected (if atom then else) or a leaf value");
  if (e.size() != 4) parse_fail(e, "if takes an atom and two branches");
  return Expr::ite(parse_atom(e[1], vars), parse_body(e[2], vars), parse_body(e[3], vars));
}

Gfodd diagram_from_sexpr(const SExpr& e, bool strict) {
  if (!e.has_head("gfodd")) parse_fail(e, "expected (gfodd ...)");
  std::vector<Variable> free;
  Prefix prefix;
  const SExpr* body = nullptr;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto& item = e[i];
    if (item.has_head("free")) {
      for (std::size_t k = 1; k < item.size(); ++k) free.push_back(parse_typed(item[k]));
    } else if (item.has_head("agg")) {
      prefix = parse_prefix(item);
    } else {
      if (body) parse_fail(item, "more than one diagram body");
      body = &item;
    }
  }
  if (!body) parse_fail(e, "missing diagram body");
  return diagram_from_parts(free, prefix, *body, strict);
}

Gfodd diagram_from_parts(const std::vector<Variable>& free, const Prefix& prefix, const SExpr& body_expr, bool strict) {
  const SExpr* body = &body_expr;
  std::map<std::string, std::string> vars;
  for (const auto& v : free) vars[v.name] = v.sort;
  for (const auto& p : prefix) {
    if (!vars.emplace(p.var.name, p.var.sort).second) parse_fail(*body, "variable '" + p.var.name + "' declared twice");
  }
  if (!body->has_head("nodes")) {
    auto expr = parse_body(*body, vars);
    return strict ? build(prefix, expr, free) : build_sorted(prefix, expr, free);
  }

  // Node table.
  std::map<long, const SExpr*> rows;
  for (std::size_t i = 1; i < body->size(); ++i) {
    const auto& row = (*body)[i];
    if (!row.is_list || (row.size() != 2 && row.size() != 4)) parse_fail(row, "expected (id value) or (id atom t f)");
    long id;
    try {
      id = std::stol(expect_atom(row[0], "node id"));
    } catch (const std::logic_error&) {
      parse_fail(row[0], "bad node id");
    }
    if (!rows.emplace(id, &row).second) parse_fail(row, "duplicate node id");
  }
  if (rows.empty()) parse_fail(*body, "empty node table");
  std::vector<Variable> order = free;
  for (const auto& p : prefix) order.push_back(p.var);
  DiagramBuilder b(order);
  std::map<long, DiagramBuilder::Ref> done;
  std::set<long> active;
  std::function<DiagramBuilder::Ref(long, const SExpr&)> visit = [&](long id, const SExpr& where) {
    if (auto it = done.find(id); it != done.end()) return it->second;
    auto it = rows.find(id);
    if (it == rows.end()) parse_fail(where, "unknown node id " + std::to_string(id));
    const SExpr& row = *it->second;
    if (!active.insert(id).second) parse_fail(row, "cycle through node " + std::to_string(id));
    DiagramBuilder::Ref r;
    if (row.size() == 2) {
      Rational v = parse_leaf(row[1]);
      if (v < 0) throw ValueError("negative leaf value " + to_string(v));
      r = b.leaf(v);
    } else {
      Atom a = parse_atom(row[1], vars);
      auto child = [&](const SExpr& c) {
        try {
          return visit(std::stol(expect_atom(c, "node id")), c);
        } catch (const std::logic_error&) {
          parse_fail(c, "bad node id");
        }
      };
      auto t = child(row[2]);
      auto f = child(row[3]);
      r = strict ? b.node_checked(a, t, f) : b.ite_atom(a, t, f);
    }
    active.erase(id);
    done.emplace(id, r);
    return r;
  };
  auto root = visit(rows.begin()->first, *body);
  return b.finish(free, prefix, root, false);
}

Gfodd parse_diagram(std::string_view text, bool strict) { return diagram_from_sexpr(parse_sexpr(text), strict); }

// ---------------------------------------------------------------------------

std::string write_prefix(const Prefix& p) {
  std::string out = "(agg";
  for (const auto& e : p) out += std::string(" (") + to_string(e.agg) + " " + e.var.name + " " + e.var.sort + ")";
  return out + ")";
}

namespace {

bool is_tree(const Gfodd& f) {
  std::vector<int> parents(f.size(), 0);
  for (const auto& n : f.nodes()) {
    if (n.is_leaf) continue;
    ++parents[n.true_child];
    ++parents[n.false_child];
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.node(static_cast<NodeId>(i)).is_leaf && parents[i] > 1) return false;
  }
  return true;
}

std::string one_line(const Gfodd& f, NodeId id) {
  const Node& n = f.node(id);
  if (n.is_leaf) return to_string(n.value);
  return "(if " + atom_text(n.atom) + " " + one_line(f, n.true_child) + " " + one_line(f, n.false_child) + ")";
}

void nested(const Gfodd& f, NodeId id, int indent, std::string& out) {
  std::string line = one_line(f, id);
  if (line.size() + static_cast<std::size_t>(indent) <= 80) {
    out += line;
    return;
  }
  const Node& n = f.node(id);
  std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  out += "(if " + atom_text(n.atom) + "\n" + pad;
  nested(f, n.true_child, indent + 2, out);
  out += "\n" + pad;
  nested(f, n.false_child, indent + 2, out);
  out += ")";
}

}  // namespace

std::string write_body(const Gfodd& f, int indent) {
  std::string out;
  if (is_tree(f)) {
    nested(f, f.root(), indent, out);
    return out;
  }
  std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  out = "(nodes";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Node& n = f.node(static_cast<NodeId>(i));
    out += "\n" + pad + "(" + std::to_string(i) + " ";
    if (n.is_leaf) {
      out += to_string(n.value);
    } else {
      out += atom_text(n.atom) + " " + std::to_string(n.true_child) + " " + std::to_string(n.false_child);
    }
    out += ")";
  }
  return out + ")";
}

std::string write_diagram(const Gfodd& f) {
  std::string out = "(gfodd\n";
  if (!f.free_vars().empty()) {
    out += "  (free";
    for (const auto& v : f.free_vars()) out += " (" + v.name + " " + v.sort + ")";
    out += ")\n";
  }
  out += "  " + write_prefix(f.prefix()) + "\n  ";
  out += write_body(f, 2);
  return out + ")\n";
}

std::string to_dot(const Gfodd& f, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n";
  os << "  ordering=out;\n";
  std::string agg;
  for (const auto& e : f.prefix()) {
    if (!agg.empty()) agg += ", ";
    agg += std::string(to_string(e.agg)) + " " + e.var.name + ":" + e.var.sort;
  }
  if (!agg.empty()) os << "  label=\"" << agg << "\";\n  labelloc=t;\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Node& n = f.node(static_cast<NodeId>(i));
    os << "  n" << i << " [";
    if (n.is_leaf) {
      os << "shape=box, label=\"" << to_string(n.value) << "\"";
    } else if (n.atom.is_equality()) {
      os << "label=\"" << n.atom.args[0].name << " = " << n.atom.args[1].name << "\"";
    } else {
      os << "label=\"" << n.atom.predicate << "(";
      for (std::size_t k = 0; k < n.atom.args.size(); ++k) os << (k ? "," : "") << n.atom.args[k].name;
      os << ")\"";
    }
    os << "];\n";
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Node& n = f.node(static_cast<NodeId>(i));
    if (n.is_leaf) continue;
    os << "  n" << i << " -> n" << n.true_child << " [label=\"t\"];\n";
    os << "  n" << i << " -> n" << n.false_child << " [label=\"f\", style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Object> parse_objects(const SExpr& e) {
  if (!e.has_head("objects")) parse_fail(e, "expected (objects ...)");
  std::vector<Object> out;
  for (std::size_t i = 1; i < e.size(); ++i) {
    auto v = parse_typed(e[i]);
    out.push_back({v.name, v.sort});
  }
  return out;
}

Interpretation state_in(const SExpr& e, std::shared_ptr<const Universe> u) {
  Interpretation s(std::move(u));
  for (std::size_t i = 2; i < e.size(); ++i) {
    Atom a = parse_atom(e[i], {});
    if (a.is_equality()) parse_fail(e[i], "equality atoms are not stored in states");
    s.set(a, true);
  }
  return s;
}

}  // namespace

Interpretation parse_state(const SExpr& e, const std::shared_ptr<const Vocabulary>& vocab) {
  if (!e.has_head("state") || e.size() < 2) parse_fail(e, "expected (state (objects ...) facts...)");
  return state_in(e, std::make_shared<Universe>(vocab, parse_objects(e[1])));
}

std::vector<Interpretation> parse_states(std::string_view text, const std::shared_ptr<const Vocabulary>& vocab) {
  auto top = parse_sexprs(text);
  std::vector<const SExpr*> items;
  for (const auto& t : top) {
    if (t.has_head("states")) {
      for (std::size_t i = 1; i < t.size(); ++i) items.push_back(&t[i]);
    } else {
      items.push_back(&t);
    }
  }
  std::vector<Interpretation> out;
  std::map<std::string, std::shared_ptr<const Universe>> universes;
  for (const auto* e : items) {
    if (!e->has_head("state") || e->size() < 2) parse_fail(*e, "expected (state (objects ...) facts...)");
    std::string key = to_string((*e)[1]);
    auto& u = universes[key];
    if (!u) u = std::make_shared<Universe>(vocab, parse_objects((*e)[1]));
    out.push_back(state_in(*e, u));
  }
  return out;
}

std::string write_state(const Interpretation& s) {
  std::string out = "(state (objects";
  for (const auto& o : s.universe().objects()) out += " (" + o.name + " " + o.sort + ")";
  out += ")";
  for (const auto& a : s.facts()) out += " " + atom_text(a);
  return out + ")";
}

std::string write_states(const std::vector<Interpretation>& states) {
  std::string out = "(states";
  for (const auto& s : states) out += "\n  " + write_state(s);
  return out + ")\n";
}

}  // namespace gfodd
