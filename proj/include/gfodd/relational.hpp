#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gfodd {

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

/// A sort. A sort with members is the union of those sorts (e.g. location =
/// shop | depot); objects are declared with a base sort only.
struct Sort {
  std::string name;
  std::vector<std::string> members;

  friend bool operator==(const Sort&, const Sort&) = default;
};

struct Predicate {
  std::string name;
  std::vector<std::string> arg_sorts;
  bool is_special = false;

  std::size_t arity() const { return arg_sorts.size(); }
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

class Vocabulary {
 public:
  void add_sort(Sort sort);
  void add_predicate(Predicate pred);

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<Predicate>& predicates() const { return predicates_; }

  std::optional<std::size_t> find_sort(const std::string& name) const;
  std::optional<std::size_t> find_predicate(const std::string& name) const;
  const Sort& sort(const std::string& name) const;
  const Predicate& predicate(const std::string& name) const;

  /// True when every object of `sub` is an object of `super` (reflexive).
  bool is_subsort(const std::string& sub, const std::string& super) const;
  /// Base (non-union) sorts contained in `name`, in declaration order.
  std::vector<std::string> base_sorts(const std::string& name) const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<Sort> sorts_;
  std::vector<Predicate> predicates_;
  std::map<std::string, std::size_t> sort_index_;
  std::map<std::string, std::size_t> predicate_index_;
};

// ---------------------------------------------------------------------------
// Terms, atoms, substitutions
// ---------------------------------------------------------------------------

struct Variable {
  std::string name;
  std::string sort;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// A variable or a constant. Constants stand for domain objects as well as
/// temporary symbols (Skolem constants, action parameters). A constant's sort
/// may be empty when it is not known.
struct Term {
  enum class Kind : std::uint8_t { Constant, Variable };

  Kind kind = Kind::Constant;
  std::string name;
  std::string sort;

  static Term variable(const Variable& v) { return {Kind::Variable, v.name, v.sort}; }
  static Term variable(std::string name, std::string sort) {
    return {Kind::Variable, std::move(name), std::move(sort)};
  }
  static Term constant(std::string name, std::string sort = {}) {
    return {Kind::Constant, std::move(name), std::move(sort)};
  }

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Constant; }
  Variable as_variable() const { return {name, sort}; }

  // Identity is kind + name; the sort is an annotation.
  friend bool operator==(const Term& a, const Term& b) { return a.kind == b.kind && a.name == b.name; }
  friend bool operator<(const Term& a, const Term& b) {
    return a.kind != b.kind ? a.kind < b.kind : a.name < b.name;
  }
};

inline constexpr const char* kEqualityPredicate = "=";

/// A predicate applied to terms, or an equality test (predicate "=", two args).
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  static Atom equality(Term a, Term b) { return {kEqualityPredicate, {std::move(a), std::move(b)}}; }
  bool is_equality() const { return predicate == kEqualityPredicate; }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);

/// Ordered variable -> object-name mapping.
struct Substitution {
  std::vector<std::pair<Variable, std::string>> bindings;

  const std::string* find(const std::string& var_name) const;
  void bind(const Variable& v, std::string object) { bindings.emplace_back(v, std::move(object)); }
  std::size_t size() const { return bindings.size(); }
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

std::string to_string(const Substitution& s);

/// Replaces bound variables by constants. The object's sort is checked
/// against the variable's sort when `vocab` is given.
Atom apply_substitution(const Atom& atom, const Substitution& theta, const Vocabulary* vocab = nullptr,
                        const class Universe* universe = nullptr);

// ---------------------------------------------------------------------------
// Interpretations
// ---------------------------------------------------------------------------

struct Object {
  std::string name;
  std::string sort;
  friend bool operator==(const Object&, const Object&) = default;
};

/// Vocabulary plus a fixed, ordered object set. Shared by all states of one
/// domain size.
class Universe {
 public:
  Universe(std::shared_ptr<const Vocabulary> vocab, std::vector<Object> objects);

  const Vocabulary& vocabulary() const { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const { return vocab_; }
  const std::vector<Object>& objects() const { return objects_; }
  std::size_t object_count() const { return objects_.size(); }

  std::optional<int> find_object(const std::string& name) const;
  int object_index(const std::string& name) const;  // throws VocabularyError
  /// Objects belonging to a (possibly union) sort, in declaration order.
  const std::vector<int>& objects_of(const std::string& sort) const;
  bool object_has_sort(int object, const std::string& sort) const;

  /// Dense slot of a ground predicate atom.
  std::size_t fact_slot(std::size_t predicate, std::span<const int> objects) const;
  std::size_t fact_slot_count() const { return slot_count_; }
  std::size_t predicate_offset(std::size_t predicate) const { return offsets_[predicate]; }

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<Object> objects_;
  std::map<std::string, int> object_index_;
  std::map<std::string, std::vector<int>> sort_objects_;
  std::vector<std::size_t> offsets_;
  std::size_t slot_count_ = 0;
};

/// A finite state: the set of true ground atoms over a Universe. Equality
/// atoms are never stored; they are decided structurally.
class Interpretation {
 public:
  explicit Interpretation(std::shared_ptr<const Universe> universe);

  const Universe& universe() const { return *universe_; }
  const std::shared_ptr<const Universe>& universe_ptr() const { return universe_; }
  const Vocabulary& vocabulary() const { return universe_->vocabulary(); }

  /// Ground atom by name. Throws VocabularyError for unknown symbols.
  bool holds(const Atom& ground_atom) const;
  bool holds(std::size_t predicate, std::span<const int> objects) const {
    return facts_[universe_->fact_slot(predicate, objects)];
  }
  bool holds_slot(std::size_t slot) const { return facts_[slot]; }

  void set(const Atom& ground_atom, bool value);
  void set(std::size_t predicate, std::span<const int> objects, bool value) {
    facts_[universe_->fact_slot(predicate, objects)] = value;
  }
  void set_slot(std::size_t slot, bool value) { facts_[slot] = value; }

  /// True ground atoms, sorted by predicate declaration order then objects.
  std::vector<Atom> facts() const;
  const std::vector<bool>& fact_bits() const { return facts_; }

  friend bool operator==(const Interpretation& a, const Interpretation& b) {
    return a.universe_ == b.universe_ && a.facts_ == b.facts_;
  }

 private:
  std::shared_ptr<const Universe> universe_;
  std::vector<bool> facts_;
};

std::string to_string(const Interpretation& state);

/// Cross product of per-sort object lists, lexicographic in the fixed object
/// order (first variable varies slowest). Throws EmptyDomainError.
std::vector<Substitution> enumerate_bindings(const std::vector<Variable>& vars, const Interpretation& state);

}  // namespace gfodd
