#include "gfodd/relational.hpp"

#include <algorithm>
#include <sstream>

#include "gfodd/error.hpp"

namespace gfodd {

void Vocabulary::add_sort(Sort sort) {
  if (sort_index_.count(sort.name)) throw VocabularyError("duplicate sort '" + sort.name + "'");
  for (const auto& m : sort.members) {
    if (!sort_index_.count(m)) throw VocabularyError("sort '" + sort.name + "' uses undeclared sort '" + m + "'");
  }
  sort_index_[sort.name] = sorts_.size();
  sorts_.push_back(std::move(sort));
}

void Vocabulary::add_predicate(Predicate pred) {
  if (pred.name.empty() || pred.name == kEqualityPredicate) {
    throw VocabularyError("invalid predicate name '" + pred.name + "'");
  }
  if (predicate_index_.count(pred.name)) throw VocabularyError("duplicate predicate '" + pred.name + "'");
  for (const auto& s : pred.arg_sorts) {
    if (!sort_index_.count(s)) throw VocabularyError("predicate '" + pred.name + "' uses undeclared sort '" + s + "'");
  }
  if (pred.is_special && pred.arity() != 1) {
    throw VocabularyError("special predicate '" + pred.name + "' must be unary");
  }
  predicate_index_[pred.name] = predicates_.size();
  predicates_.push_back(std::move(pred));
}

std::optional<std::size_t> Vocabulary::find_sort(const std::string& name) const {
  auto it = sort_index_.find(name);
  if (it == sort_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Vocabulary::find_predicate(const std::string& name) const {
  auto it = predicate_index_.find(name);
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

const Sort& Vocabulary::sort(const std::string& name) const {
  auto i = find_sort(name);
  if (!i) throw VocabularyError("undeclared sort '" + name + "'");
  return sorts_[*i];
}

const Predicate& Vocabulary::predicate(const std::string& name) const {
  auto i = find_predicate(name);
  if (!i) throw VocabularyError("undeclared predicate '" + name + "'");
  return predicates_[*i];
}

std::vector<std::string> Vocabulary::base_sorts(const std::string& name) const {
  const Sort& s = sort(name);
  if (s.members.empty()) return {s.name};
  std::vector<std::string> out;
  for (const auto& m : s.members) {
    for (auto& b : base_sorts(m)) {
      if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
    }
  }
  return out;
}

bool Vocabulary::is_subsort(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  auto sub_bases = base_sorts(sub);
  auto super_bases = base_sorts(super);
  return std::all_of(sub_bases.begin(), sub_bases.end(), [&](const std::string& b) {
    return std::find(super_bases.begin(), super_bases.end(), b) != super_bases.end();
  });
}

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
  std::string out = "(" + a.predicate;
  for (const auto& t : a.args) out += " " + t.name;
  return out + ")";
}

const std::string* Substitution::find(const std::string& var_name) const {
  for (const auto& [v, o] : bindings) {
    if (v.name == var_name) return &o;
  }
  return nullptr;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.bindings.size(); ++i) {
    if (i) out += ", ";
    out += s.bindings[i].first.name + "->" + s.bindings[i].second;
  }
  return out + "}";
}

Atom apply_substitution(const Atom& atom, const Substitution& theta, const Vocabulary* vocab,
                        const Universe* universe) {
  Atom out = atom;
  for (auto& t : out.args) {
    if (!t.is_variable()) continue;
    for (const auto& [v, obj] : theta.bindings) {
      if (v.name != t.name) continue;
      if (!v.sort.empty() && !t.sort.empty() && vocab && !vocab->is_subsort(v.sort, t.sort) &&
          !vocab->is_subsort(t.sort, v.sort)) {
        throw VocabularyError("sort mismatch binding " + t.name + ":" + t.sort + " in " + to_string(atom));
      }
      if (universe && !t.sort.empty()) {
        int idx = universe->object_index(obj);
        if (!universe->object_has_sort(idx, t.sort)) {
          throw VocabularyError("object '" + obj + "' is not of sort '" + t.sort + "'");
        }
      }
      t = Term::constant(obj, t.sort);
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Universe::Universe(std::shared_ptr<const Vocabulary> vocab, std::vector<Object> objects)
    : vocab_(std::move(vocab)), objects_(std::move(objects)) {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const auto& o = objects_[i];
    if (!vocab_->find_sort(o.sort)) throw VocabularyError("object '" + o.name + "' has undeclared sort '" + o.sort + "'");
    if (!vocab_->sort(o.sort).members.empty()) {
      throw VocabularyError("object '" + o.name + "' must be declared with a base sort");
    }
    if (!object_index_.emplace(o.name, static_cast<int>(i)).second) {
      throw VocabularyError("duplicate object '" + o.name + "'");
    }
  }
  for (const auto& s : vocab_->sorts()) {
    auto& list = sort_objects_[s.name];
    auto bases = vocab_->base_sorts(s.name);
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (std::find(bases.begin(), bases.end(), objects_[i].sort) != bases.end()) list.push_back(static_cast<int>(i));
    }
  }
  std::size_t n = objects_.size();
  for (const auto& p : vocab_->predicates()) {
    offsets_.push_back(slot_count_);
    std::size_t size = 1;
    for (std::size_t k = 0; k < p.arity(); ++k) size *= n;
    slot_count_ += size;
  }
}

std::optional<int> Universe::find_object(const std::string& name) const {
  auto it = object_index_.find(name);
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

int Universe::object_index(const std::string& name) const {
  auto i = find_object(name);
  if (!i) throw VocabularyError("undeclared object '" + name + "'");
  return *i;
}

const std::vector<int>& Universe::objects_of(const std::string& sort) const {
  auto it = sort_objects_.find(sort);
  if (it == sort_objects_.end()) throw VocabularyError("undeclared sort '" + sort + "'");
  return it->second;
}

bool Universe::object_has_sort(int object, const std::string& sort) const {
  const auto& list = objects_of(sort);
  return std::binary_search(list.begin(), list.end(), object);
}

std::size_t Universe::fact_slot(std::size_t predicate, std::span<const int> objects) const {
  std::size_t slot = 0;
  std::size_t n = objects_.size();
  for (std::size_t k = objects.size(); k-- > 0;) slot = slot * n + static_cast<std::size_t>(objects[k]);
  return offsets_[predicate] + slot;
}

// ---------------------------------------------------------------------------

Interpretation::Interpretation(std::shared_ptr<const Universe> universe)
    : universe_(std::move(universe)), facts_(universe_->fact_slot_count(), false) {}

namespace {

struct ResolvedAtom {
  std::size_t predicate = 0;
  std::vector<int> objects;
};

ResolvedAtom resolve(const Universe& u, const Atom& atom) {
  ResolvedAtom r;
  for (const auto& t : atom.args) {
    if (t.is_variable()) throw VocabularyError("atom is not ground: " + to_string(atom));
    r.objects.push_back(u.object_index(t.name));
  }
  if (atom.is_equality()) return r;
  const auto& vocab = u.vocabulary();
  auto p = vocab.find_predicate(atom.predicate);
  if (!p) throw VocabularyError("undeclared predicate '" + atom.predicate + "'");
  const auto& pred = vocab.predicates()[*p];
  if (pred.arity() != atom.args.size()) throw VocabularyError("arity mismatch in " + to_string(atom));
  for (std::size_t k = 0; k < pred.arity(); ++k) {
    if (!u.object_has_sort(r.objects[k], pred.arg_sorts[k])) {
      throw VocabularyError("object '" + atom.args[k].name + "' is not of sort '" + pred.arg_sorts[k] + "' in " +
                            to_string(atom));
    }
  }
  r.predicate = *p;
  return r;
}

}  // namespace

bool Interpretation::holds(const Atom& ground_atom) const {
  if (ground_atom.is_equality() && ground_atom.args.size() != 2) {
    throw VocabularyError("equality needs two arguments");
  }
  auto r = resolve(*universe_, ground_atom);
  if (ground_atom.is_equality()) return r.objects[0] == r.objects[1];
  return holds(r.predicate, r.objects);
}

void Interpretation::set(const Atom& ground_atom, bool value) {
  if (ground_atom.is_equality()) throw VocabularyError("equality atoms cannot be stored");
  auto r = resolve(*universe_, ground_atom);
  set(r.predicate, r.objects, value);
}

std::vector<Atom> Interpretation::facts() const {
  std::vector<Atom> out;
  const auto& vocab = vocabulary();
  const auto& objs = universe_->objects();
  std::size_t n = objs.size();
  for (std::size_t p = 0; p < vocab.predicates().size(); ++p) {
    const auto& pred = vocab.predicates()[p];
    std::size_t size = 1;
    for (std::size_t k = 0; k < pred.arity(); ++k) size *= n;
    // Enumerate tuples lexicographically (first argument slowest).
    std::vector<int> tuple(pred.arity(), 0);
    for (std::size_t count = 0; count < size; ++count) {
      if (holds(p, tuple)) {
        Atom a{pred.name, {}};
        for (int o : tuple) a.args.push_back(Term::constant(objs[o].name, objs[o].sort));
        out.push_back(std::move(a));
      }
      for (std::size_t k = tuple.size(); k-- > 0;) {
        if (++tuple[k] < static_cast<int>(n)) break;
        tuple[k] = 0;
      }
    }
  }
  return out;
}

std::string to_string(const Interpretation& state) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& a : state.facts()) {
    os << (first ? "" : " ") << to_string(a);
    first = false;
  }
  os << "}";
  return os.str();
}

std::vector<Substitution> enumerate_bindings(const std::vector<Variable>& vars, const Interpretation& state) {
  const auto& u = state.universe();
  std::vector<const std::vector<int>*> domains;
  for (const auto& v : vars) {
    const auto& d = u.objects_of(v.sort);
    if (d.empty()) throw EmptyDomainError("sort '" + v.sort + "' of variable '" + v.name + "' has no objects");
    domains.push_back(&d);
  }
  std::vector<Substitution> out;
  std::vector<std::size_t> pos(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], u.objects()[(*domains[i])[pos[i]]].name);
    out.push_back(std::move(s));
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++pos[k] < domains[k]->size()) break;
      pos[k] = 0;
      if (k == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

}  // namespace gfodd
