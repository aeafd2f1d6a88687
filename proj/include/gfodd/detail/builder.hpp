#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "gfodd/diagram.hpp"

namespace gfodd {

enum class ApplyOp : std::uint8_t { Add, Multiply, Max };

/// Hash-consed node store shared by all diagram-producing operations. All
/// nodes live under one variable order; finish() extracts the reachable part
/// of a root as a renumbered Gfodd.
class DiagramBuilder {
 public:
  using Ref = std::uint32_t;
  using AtomId = std::uint32_t;
  static constexpr AtomId kNoAtom = 0xffffffffu;

  explicit DiagramBuilder(const std::vector<Variable>& order);

  Ref leaf(const Rational& v);
  /// Node with `atom` above both children; throws ConstructionError otherwise.
  Ref node_checked(const Atom& atom, Ref hi, Ref lo);
  /// if atom then hi else lo, for any label order.
  Ref ite_atom(const Atom& atom, Ref hi, Ref lo);
  /// if cond then hi else lo, where cond has 0/1 leaves.
  Ref ite(Ref cond, Ref hi, Ref lo);
  Ref apply(ApplyOp op, Ref a, Ref b);
  Ref scale(Ref a, const Rational& c);
  /// 1 - cond for a 0/1 diagram.
  Ref complement(Ref cond);

  /// Copies f into this store, mapping terms through `renaming`.
  Ref import(const Gfodd& f, const std::map<Term, Term>& renaming = {});
  /// Copies f, rewriting every label through `transform`.
  Ref import(const Gfodd& f, const std::function<Atom(const Atom&)>& transform);

  Gfodd finish(const std::vector<Variable>& free, const Prefix& prefix, Ref root, bool prune_unused) const;

  bool is_leaf(Ref r) const { return nodes_[r].atom == kNoAtom; }
  const Rational& value(Ref r) const { return values_[nodes_[r].value]; }
  AtomId top(Ref r) const { return nodes_[r].atom; }
  Ref hi(Ref r) const { return nodes_[r].hi; }
  Ref lo(Ref r) const { return nodes_[r].lo; }
  const Atom& atom(AtomId a) const { return atoms_[a].atom; }

  /// Interns an atom (equality atoms are oriented canonically). Returns
  /// kNoAtom for a trivially true equality.
  AtomId intern(const Atom& atom);
  /// Three-way comparison of interned atoms under the builder's order.
  int compare(AtomId a, AtomId b) const;

  std::size_t store_size() const { return nodes_.size(); }

 private:
  struct StoredNode {
    AtomId atom;
    Ref hi;
    Ref lo;
    std::uint32_t value;
  };
  struct TermKey {
    bool is_var;
    int index;            // variables
    const std::string* name;  // constants
  };
  struct StoredAtom {
    Atom atom;
    std::vector<TermKey> keys;
  };

  Ref make(AtomId atom, Ref hi, Ref lo);
  Ref ite_id(AtomId atom, Ref hi, Ref lo);
  Ref cofactor(Ref r, AtomId atom, bool branch) const;
  int compare_terms(const TermKey& a, const TermKey& b) const;
  TermKey key_of(const Term& t) const;
  // top label of r as comparable value (leaves compare greatest)
  bool precedes(AtomId a, Ref r) const { return is_leaf(r) || compare(a, top(r)) < 0; }

  OrderContext order_;
  std::vector<StoredNode> nodes_;
  std::vector<Rational> values_;
  std::map<Rational, Ref> leaf_index_;
  std::deque<StoredAtom> atoms_;  // stable addresses for TermKey::name
  std::map<Atom, AtomId> atom_index_;
  struct Triple {
    std::uint32_t a, b, c;
    friend bool operator==(const Triple&, const Triple&) = default;
  };
  struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
      std::uint64_t h = t.a * 0x9E3779B97F4A7C15ull;
      h ^= (t.b + 0x7F4A7C15ull + (h << 6) + (h >> 2)) * 0xBF58476D1CE4E5B9ull;
      h ^= (t.c + 0x94D049BBull + (h << 6) + (h >> 2)) * 0x94D049BB133111EBull;
      return static_cast<std::size_t>(h ^ (h >> 31));
    }
  };
  using TripleMap = std::unordered_map<Triple, Ref, TripleHash>;

  TripleMap unique_;         // (atom, hi, lo)
  TripleMap ite_atom_memo_;  // (atom, hi, lo)
  TripleMap ite_memo_;       // (cond, hi, lo)
  TripleMap apply_memo_;     // (op, a, b)
};

}  // namespace gfodd
