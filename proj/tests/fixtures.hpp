#pragma once

#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gfodd/diagram.hpp"
#include "gfodd/domain.hpp"
#include "gfodd/io.hpp"
#include "gfodd/relational.hpp"

namespace gfodd::testing {

// Inventory vocabulary: shop, truck, depot, location = shop | depot.
inline std::shared_ptr<Vocabulary> inventory_vocabulary() {
  auto v = std::make_shared<Vocabulary>();
  v->add_sort({"shop", {}});
  v->add_sort({"truck", {}});
  v->add_sort({"depot", {}});
  v->add_sort({"location", {"shop", "depot"}});
  v->add_predicate({"empty", {"shop"}, true});
  v->add_predicate({"tin", {"truck", "location"}, false});
  v->add_predicate({"loaded", {"truck"}, false});
  return v;
}

inline std::shared_ptr<const Universe> inventory_universe(int shops) {
  std::vector<Object> objs;
  for (int i = 1; i <= shops; ++i) objs.push_back({"s" + std::to_string(i), "shop"});
  objs.push_back({"t1", "truck"});
  objs.push_back({"d1", "depot"});
  return std::make_shared<Universe>(inventory_vocabulary(), objs);
}

// Shops s1, s2; truck t1; depot d1; facts empty(s1), tin(t1,d1), loaded(t1).
inline Interpretation fixture_i2() {
  Interpretation s(inventory_universe(2));
  s.set(Atom{"empty", {Term::constant("s1")}}, true);
  s.set(Atom{"tin", {Term::constant("t1"), Term::constant("d1")}}, true);
  s.set(Atom{"loaded", {Term::constant("t1")}}, true);
  return s;
}

inline Gfodd fixture_fr() { return parse_diagram("(gfodd (agg (avg y shop)) (if (empty y) 0 1))"); }

inline Gfodd fixture_frex() {
  return parse_diagram("(gfodd (agg (max t truck) (avg s shop)) (if (empty s) (if (tin t s) 1/10 0) 1))");
}

// Ground state of a builtin-style domain with n scaled objects; facts are
// written like "tin t1 s1".
inline Interpretation domain_state(const DomainSpec& d, int n, const std::vector<std::string>& facts) {
  Interpretation s(instance_universe(d, n));
  for (const auto& f : facts) {
    std::istringstream in(f);
    Atom a;
    in >> a.predicate;
    for (std::string arg; in >> arg;) a.args.push_back(Term::constant(arg));
    s.set(a, true);
  }
  return s;
}

// Small two-sort vocabulary for randomized checks.
inline std::shared_ptr<Vocabulary> random_vocabulary() {
  auto v = std::make_shared<Vocabulary>();
  v->add_sort({"a", {}});
  v->add_sort({"b", {}});
  v->add_predicate({"p", {"a"}, false});
  v->add_predicate({"q", {"a", "b"}, false});
  v->add_predicate({"r", {"b", "b"}, false});
  v->add_predicate({"s", {"b"}, false});
  return v;
}

struct RandomCase {
  Gfodd diagram;
  Interpretation state;
};

// Random max* avg diagram with at most `max_vars` MAX variables and
// `max_nodes` internal nodes, and a random interpretation with 1..max_objects
// objects per sort (at least `min_objects`).
class RandomCases {
 public:
  explicit RandomCases(std::uint64_t seed) : rng_(seed), vocab_(random_vocabulary()) {}

  Prefix random_prefix(int max_vars) {
    Prefix p;
    int n = pick(0, max_vars);
    for (int i = 0; i < n; ++i) p.push_back({{"x" + std::to_string(i + 1), sort()}, Aggregator::Max});
    p.push_back({{"y", sort()}, Aggregator::Avg});
    return p;
  }

  Gfodd random_diagram(const Prefix& p, int max_nodes) {
    int budget = pick(0, max_nodes);
    return build_sorted(p, expr(p, budget));
  }

  Gfodd random_diagram(int max_vars, int max_nodes) { return random_diagram(random_prefix(max_vars), max_nodes); }

  Interpretation random_state(int min_objects, int max_objects) {
    std::vector<Object> objs;
    int na = pick(min_objects, max_objects);
    int nb = pick(min_objects, max_objects);
    for (int i = 0; i < na; ++i) objs.push_back({"a" + std::to_string(i + 1), "a"});
    for (int i = 0; i < nb; ++i) objs.push_back({"b" + std::to_string(i + 1), "b"});
    Interpretation s(std::make_shared<Universe>(vocab_, objs));
    int density = pick(1, 3);
    for (std::size_t slot = 0; slot < s.universe().fact_slot_count(); ++slot) {
      s.set_slot(slot, pick(0, 3) < density);
    }
    return s;
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }
  const std::shared_ptr<Vocabulary>& vocabulary() const { return vocab_; }

 private:
  std::string sort() { return pick(0, 1) ? "a" : "b"; }

  Term term(const Prefix& p, const std::string& sort) {
    std::vector<Term> options;
    for (const auto& e : p) {
      if (e.var.sort == sort) options.push_back(Term::variable(e.var));
    }
    if (options.empty() || pick(0, 5) == 0) return Term::constant(sort + "1", sort);
    return options[static_cast<std::size_t>(pick(0, static_cast<int>(options.size()) - 1))];
  }

  Atom atom(const Prefix& p) {
    switch (pick(0, 4)) {
      case 0: return {"p", {term(p, "a")}};
      case 1: return {"q", {term(p, "a"), term(p, "b")}};
      case 2: return {"r", {term(p, "b"), term(p, "b")}};
      case 3: return {"s", {term(p, "b")}};
      default: {
        std::string srt = sort();
        return Atom::equality(term(p, srt), term(p, srt));
      }
    }
  }

  ExprPtr expr(const Prefix& p, int& budget) {
    if (budget <= 0 || pick(0, 4) == 0) {
      static const int nums[] = {0, 1, 1, 2, 3, 1, 0, 5};
      Rational v(nums[pick(0, 7)], pick(1, 2));
      v.canonicalize();
      return Expr::leaf(v);
    }
    --budget;
    Atom a = atom(p);
    auto t = expr(p, budget);
    auto f = expr(p, budget);
    return Expr::ite(a, t, f);
  }

  std::mt19937_64 rng_;
  std::shared_ptr<Vocabulary> vocab_;
};

}  // namespace gfodd::testing
