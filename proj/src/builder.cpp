#include "gfodd/detail/builder.hpp"

#include <algorithm>
#include <functional>

#include "gfodd/error.hpp"

namespace gfodd {

DiagramBuilder::DiagramBuilder(const std::vector<Variable>& order) : order_(order) {}

DiagramBuilder::TermKey DiagramBuilder::key_of(const Term& t) const {
  if (t.is_variable()) return {true, order_.index(t.name), nullptr};
  return {false, 0, &t.name};
}

int DiagramBuilder::compare_terms(const TermKey& a, const TermKey& b) const {
  if (a.is_var != b.is_var) return a.is_var ? 1 : -1;
  if (a.is_var) return a.index < b.index ? -1 : (a.index > b.index ? 1 : 0);
  int c = a.name->compare(*b.name);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int DiagramBuilder::compare(AtomId a, AtomId b) const {
  if (a == b) return 0;
  const auto& x = atoms_[a];
  const auto& y = atoms_[b];
  bool xe = x.atom.is_equality();
  bool ye = y.atom.is_equality();
  if (xe != ye) return xe ? -1 : 1;
  if (!xe) {
    int c = x.atom.predicate.compare(y.atom.predicate);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  std::size_t n = std::min(x.keys.size(), y.keys.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_terms(x.keys[i], y.keys[i]);
    if (c != 0) return c;
  }
  if (x.keys.size() != y.keys.size()) return x.keys.size() < y.keys.size() ? -1 : 1;
  return 0;
}

DiagramBuilder::AtomId DiagramBuilder::intern(const Atom& atom_in) {
  Atom atom = atom_in;
  if (atom.is_equality()) {
    if (atom.args.size() != 2) throw ConstructionError("equality atom needs two arguments");
    if (atom.args[0] == atom.args[1]) return kNoAtom;
    if (compare_terms(key_of(atom.args[0]), key_of(atom.args[1])) < 0) std::swap(atom.args[0], atom.args[1]);
  }
  auto it = atom_index_.find(atom);
  if (it != atom_index_.end()) return it->second;
  // Validate variables before storing.
  for (const auto& t : atom.args) {
    if (t.is_variable()) (void)order_.index(t.name);
  }
  AtomId id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(StoredAtom{atom, {}});
  auto& stored = atoms_.back();
  for (const auto& t : stored.atom.args) stored.keys.push_back(key_of(t));
  atom_index_.emplace(std::move(atom), id);
  return id;
}

DiagramBuilder::Ref DiagramBuilder::leaf(const Rational& v) {
  auto it = leaf_index_.find(v);
  if (it != leaf_index_.end()) return it->second;
  Ref r = static_cast<Ref>(nodes_.size());
  values_.push_back(v);
  nodes_.push_back({kNoAtom, 0, 0, static_cast<std::uint32_t>(values_.size() - 1)});
  leaf_index_.emplace(v, r);
  return r;
}

DiagramBuilder::Ref DiagramBuilder::make(AtomId atom, Ref hi, Ref lo) {
  if (hi == lo) return hi;
  Triple key{atom, hi, lo};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  Ref r = static_cast<Ref>(nodes_.size());
  nodes_.push_back({atom, hi, lo, 0});
  unique_.emplace(key, r);
  return r;
}

DiagramBuilder::Ref DiagramBuilder::node_checked(const Atom& atom, Ref hi, Ref lo) {
  AtomId id = intern(atom);
  if (id == kNoAtom) return hi;
  if (!precedes(id, hi) || !precedes(id, lo)) {
    throw ConstructionError("label order violated at " + to_string(atom));
  }
  return make(id, hi, lo);
}

DiagramBuilder::Ref DiagramBuilder::cofactor(Ref r, AtomId atom, bool branch) const {
  if (is_leaf(r) || top(r) != atom) return r;
  return branch ? hi(r) : lo(r);
}

DiagramBuilder::Ref DiagramBuilder::ite_atom(const Atom& atom, Ref hi_ref, Ref lo_ref) {
  AtomId id = intern(atom);
  if (id == kNoAtom) return hi_ref;
  return ite_id(id, hi_ref, lo_ref);
}

DiagramBuilder::Ref DiagramBuilder::ite_id(AtomId a, Ref h, Ref l) {
  if (h == l) return h;
  if (precedes(a, h) && precedes(a, l)) return make(a, h, l);
  Triple key{a, h, l};
  if (auto it = ite_atom_memo_.find(key); it != ite_atom_memo_.end()) return it->second;
  AtomId t;
  if (is_leaf(h)) {
    t = top(l);
  } else if (is_leaf(l)) {
    t = top(h);
  } else {
    t = compare(top(h), top(l)) <= 0 ? top(h) : top(l);
  }
  Ref r;
  if (compare(a, t) == 0) {
    r = make(a, cofactor(h, a, true), cofactor(l, a, false));
  } else {
    Ref rt = ite_id(a, cofactor(h, t, true), cofactor(l, t, true));
    Ref rf = ite_id(a, cofactor(h, t, false), cofactor(l, t, false));
    r = make(t, rt, rf);
  }
  ite_atom_memo_.emplace(key, r);
  return r;
}

DiagramBuilder::Ref DiagramBuilder::ite(Ref c, Ref h, Ref l) {
  if (is_leaf(c)) {
    const Rational& v = value(c);
    if (v == 1) return h;
    if (v == 0) return l;
    throw ValueError("condition diagram must have 0/1 leaves, found " + to_string(v));
  }
  if (h == l) return h;
  Triple key{c, h, l};
  if (auto it = ite_memo_.find(key); it != ite_memo_.end()) return it->second;
  AtomId t = top(c);
  for (Ref x : {h, l}) {
    if (!is_leaf(x) && compare(top(x), t) < 0) t = top(x);
  }
  Ref rt = ite(cofactor(c, t, true), cofactor(h, t, true), cofactor(l, t, true));
  Ref rf = ite(cofactor(c, t, false), cofactor(h, t, false), cofactor(l, t, false));
  Ref r = make(t, rt, rf);
  ite_memo_.emplace(key, r);
  return r;
}

DiagramBuilder::Ref DiagramBuilder::apply(ApplyOp op, Ref a, Ref b) {
  if (is_leaf(a) && is_leaf(b)) {
    const Rational& x = value(a);
    const Rational& y = value(b);
    switch (op) {
      case ApplyOp::Add: return leaf(x + y);
      case ApplyOp::Multiply: return leaf(x * y);
      case ApplyOp::Max: return leaf(x < y ? y : x);
    }
  }
  if (a > b) std::swap(a, b);  // all ops commute
  if (op == ApplyOp::Add) {
    if (is_leaf(a) && value(a) == 0) return b;
    if (is_leaf(b) && value(b) == 0) return a;
  } else if (op == ApplyOp::Multiply) {
    for (Ref x : {a, b}) {
      if (is_leaf(x) && value(x) == 0) return x;
    }
    if (is_leaf(a) && value(a) == 1) return b;
    if (is_leaf(b) && value(b) == 1) return a;
  } else if (a == b) {
    return a;
  }
  Triple key{static_cast<std::uint32_t>(op), a, b};
  if (auto it = apply_memo_.find(key); it != apply_memo_.end()) return it->second;
  AtomId t;
  if (is_leaf(a)) {
    t = top(b);
  } else if (is_leaf(b)) {
    t = top(a);
  } else {
    t = compare(top(a), top(b)) <= 0 ? top(a) : top(b);
  }
  Ref rt = apply(op, cofactor(a, t, true), cofactor(b, t, true));
  Ref rf = apply(op, cofactor(a, t, false), cofactor(b, t, false));
  Ref r = make(t, rt, rf);
  apply_memo_.emplace(key, r);
  return r;
}

DiagramBuilder::Ref DiagramBuilder::scale(Ref a, const Rational& c) {
  if (c == 1) return a;
  if (c == 0) return leaf(Rational(0));
  std::unordered_map<Ref, Ref> memo;
  std::function<Ref(Ref)> rec = [&](Ref r) -> Ref {
    if (is_leaf(r)) return leaf(value(r) * c);
    if (auto it = memo.find(r); it != memo.end()) return it->second;
    Ref out = make(top(r), rec(hi(r)), rec(lo(r)));
    memo.emplace(r, out);
    return out;
  };
  return rec(a);
}

DiagramBuilder::Ref DiagramBuilder::complement(Ref cond) {
  std::unordered_map<Ref, Ref> memo;
  std::function<Ref(Ref)> rec = [&](Ref r) -> Ref {
    if (is_leaf(r)) return leaf(Rational(1) - value(r));
    if (auto it = memo.find(r); it != memo.end()) return it->second;
    Ref out = make(top(r), rec(hi(r)), rec(lo(r)));
    memo.emplace(r, out);
    return out;
  };
  return rec(cond);
}

DiagramBuilder::Ref DiagramBuilder::import(const Gfodd& f, const std::map<Term, Term>& renaming) {
  const auto& nodes = f.nodes();
  std::vector<Ref> mapped(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& n = nodes[i];
    if (n.is_leaf) {
      mapped[i] = leaf(n.value);
      continue;
    }
    if (renaming.empty()) {
      mapped[i] = ite_atom(n.atom, mapped[n.true_child], mapped[n.false_child]);
      continue;
    }
    Atom a = n.atom;
    for (auto& t : a.args) {
      auto it = renaming.find(t);
      if (it != renaming.end()) t = it->second;
    }
    mapped[i] = ite_atom(a, mapped[n.true_child], mapped[n.false_child]);
  }
  return mapped[0];
}

DiagramBuilder::Ref DiagramBuilder::import(const Gfodd& f, const std::function<Atom(const Atom&)>& transform) {
  const auto& nodes = f.nodes();
  std::vector<Ref> mapped(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const Node& n = nodes[i];
    mapped[i] = n.is_leaf ? leaf(n.value) : ite_atom(transform(n.atom), mapped[n.true_child], mapped[n.false_child]);
  }
  return mapped[0];
}

Gfodd DiagramBuilder::finish(const std::vector<Variable>& free, const Prefix& prefix, Ref root,
                             bool prune_unused) const {
  // Internal nodes in reverse postorder (false branch explored first), so that
  // parents precede children and the true side receives smaller ids.
  std::vector<Ref> post;
  std::unordered_map<Ref, NodeId> id;
  std::vector<Ref> leaves;
  std::vector<std::pair<Ref, int>> stack;
  std::unordered_map<Ref, bool> seen;
  if (!is_leaf(root)) {
    stack.emplace_back(root, 0);
    seen[root] = true;
  }
  while (!stack.empty()) {
    auto& [r, state] = stack.back();
    if (state < 2) {
      Ref child = state == 0 ? lo(r) : hi(r);
      ++state;
      if (is_leaf(child)) {
        if (!seen.count(child)) {
          seen[child] = true;
          leaves.push_back(child);
        }
      } else if (!seen.count(child)) {
        seen[child] = true;
        stack.emplace_back(child, 0);
      }
      continue;
    }
    post.push_back(r);
    stack.pop_back();
  }
  if (is_leaf(root)) leaves.push_back(root);
  std::reverse(post.begin(), post.end());
  std::sort(leaves.begin(), leaves.end(), [&](Ref a, Ref b) { return value(a) < value(b); });

  Gfodd out;
  out.nodes_.clear();
  out.free_ = free;
  for (std::size_t i = 0; i < post.size(); ++i) id[post[i]] = static_cast<NodeId>(i);
  for (std::size_t i = 0; i < leaves.size(); ++i) id[leaves[i]] = static_cast<NodeId>(post.size() + i);
  std::set<std::string> used;
  for (Ref r : post) {
    Node n;
    n.is_leaf = false;
    n.atom = atoms_[top(r)].atom;
    n.true_child = id.at(hi(r));
    n.false_child = id.at(lo(r));
    for (const auto& t : n.atom.args) {
      if (t.is_variable()) used.insert(t.name);
    }
    out.nodes_.push_back(std::move(n));
  }
  for (Ref r : leaves) {
    Node n;
    n.is_leaf = true;
    n.value = value(r);
    out.nodes_.push_back(std::move(n));
  }
  for (const auto& e : prefix) {
    if (!prune_unused || used.count(e.var.name)) out.prefix_.push_back(e);
  }
  return out;
}

}  // namespace gfodd
