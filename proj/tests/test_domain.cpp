#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gfodd/domain.hpp"
#include "gfodd/error.hpp"
#include "gfodd/io.hpp"
#include "gfodd/oracle.hpp"

namespace gfodd {
namespace {

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return text.replace(at, from.size(), to);
}

Substitution bind(const Variable& v, const std::string& object) {
  Substitution s;
  s.bind(v, object);
  return s;
}

TEST(Assumptions, InventoryHoldsAll) {
  auto r = check_assumptions(builtin_domain("ic"));
  EXPECT_TRUE(r.all_hold()) << to_string(r);
  EXPECT_NE(to_string(r).find("A3 holds"), std::string::npos);
}

TEST(Assumptions, LevelsViolateA3Only) {
  auto r = check_assumptions(builtin_domain("aic"));
  EXPECT_TRUE(r.a(1).holds);
  EXPECT_TRUE(r.a(2).holds);
  EXPECT_FALSE(r.a(3).holds);
  EXPECT_FALSE(r.a(3).issues.empty());
  EXPECT_TRUE(r.a(4).holds);
  EXPECT_NE(to_string(r).find("A3 violated"), std::string::npos);
}

TEST(Assumptions, MaxRewardViolatesA4) {
  auto d = builtin_domain("ic");
  d.reward = parse_diagram("(gfodd (agg (max y shop)) (if (empty y) 0 1))");
  auto r = check_assumptions(d);
  EXPECT_FALSE(r.a(4).holds);
  EXPECT_TRUE(r.a(3).holds);
}

TEST(DomainText, RoundTrip) {
  for (const char* name : {"ic", "aic"}) {
    auto d = builtin_domain(name);
    auto text = save_domain(d);
    EXPECT_EQ(load_domain(text), d) << name;
    EXPECT_EQ(save_domain(load_domain(text)), text);
  }
}

TEST(DomainText, Errors) {
  std::string ic = builtin_domain_text("ic");
  EXPECT_THROW(load_domain(replace_once(ic, "(agg (avg y shop))", "(agg (mean y shop))")), ParseError);
  try {
    load_domain(replace_once(ic, "(tvd (empty y) (if (= y i) 1", "(tvd (empty y) (if (= y i) 1/2"));
    FAIL() << "expected a value error";
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("TVD leaves must be 0 or 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_domain(replace_once(ic, "(prob 3/5)", "(prob 1/2)")), ModelError);
  EXPECT_THROW(load_domain(replace_once(ic, "(empty shop :special)", "(empty store :special)")), ParseError);
  EXPECT_THROW(load_domain(replace_once(ic, "(discount 9/10)", "(discount 1)")), ValueError);
  EXPECT_THROW(load_domain(ic.substr(0, ic.size() / 2)), ParseError);
  EXPECT_THROW(builtin_domain("ic", Rational(3, 2)), ArgumentError);
  EXPECT_THROW(builtin_domain("sokoban"), ArgumentError);
  EXPECT_EQ(builtin_domain("ic", Rational(1, 2)).discount, Rational(1, 2));
}

TEST(States, Counts) {
  auto ic = builtin_domain("ic");
  for (int n = 1; n <= 4; ++n) {
    std::uint64_t formula = (1u << n) * static_cast<std::uint64_t>(n + 1) * 2;
    EXPECT_EQ(state_count(ic, n), formula);
    EXPECT_EQ(enumerate_states(ic, n).size(), formula);
  }
  EXPECT_EQ(enumerate_states(ic, 2).size(), 24u);
  EXPECT_EQ(enumerate_states(ic, 3).size(), 64u);
  auto aic = builtin_domain("aic");
  EXPECT_EQ(all_focus_states(aic, 2).size(), 216u);
  EXPECT_EQ(enumerate_states(aic, 2).size(), all_focus_states(aic, 2).size());
  EXPECT_THROW(enumerate_states(ic, 0), EmptyDomainError);
  EXPECT_THROW(all_focus_states(ic, 0), EmptyDomainError);
}

TEST(States, DistinctAndConsistent) {
  for (const char* name : {"ic", "aic"}) {
    auto d = builtin_domain(name);
    auto states = enumerate_states(d, 2);
    std::set<std::vector<bool>> seen;
    for (const auto& s : states) {
      EXPECT_TRUE(is_consistent(d, s));
      seen.insert(s.fact_bits());
    }
    EXPECT_EQ(seen.size(), states.size());
  }
  auto ic = builtin_domain("ic");
  auto bad = testing::domain_state(ic, 2, {"tin t1 s1", "tin t1 d1"});
  EXPECT_FALSE(is_consistent(ic, bad));
  EXPECT_FALSE(is_consistent(ic, testing::domain_state(ic, 2, {})));
}

TEST(States, LevelsMutuallyExclusive) {
  auto aic = builtin_domain("aic");
  for (const auto& s : enumerate_states(aic, 2)) {
    for (const char* shop : {"s1", "s2"}) {
      int levels = 0;
      for (const char* p : {"level0", "level1", "level2"}) levels += s.holds(Atom{p, {Term::constant(shop)}});
      EXPECT_EQ(levels, 1);
    }
  }
}

TEST(Dynamics, ArrivalProbabilityIsTwoFifths) {
  auto ic = builtin_domain("ic");
  const auto& x = *ic.exogenous;
  for (const auto& s : all_focus_states(ic, 2)) {
    for (const char* shop : {"s1", "s2"}) {
      EXPECT_EQ(value_at(x.variants[0].prob, s, bind(x.param, shop)), Rational(2, 5));
    }
  }
}

TEST(Dynamics, VariantProbabilitiesSumToOne) {
  for (const char* name : {"ic", "aic"}) {
    auto d = builtin_domain(name);
    for (const auto& s : all_focus_states(d, 2)) {
      for (const auto& a : ground_actions(d, s.universe_ptr())) {
        Rational total;
        for (const auto& v : d.action(a.schema).variants) total += value_at(v.prob, s, a.binding);
        EXPECT_EQ(total, 1);
      }
      Rational total;
      for (const auto& v : d.exogenous->variants) total += value_at(v.prob, s, bind(d.exogenous->param, "s2"));
      EXPECT_EQ(total, 1);
    }
  }
}

TEST(Dynamics, PredicatesWithoutTvdKeepTheirValue) {
  auto ic = builtin_domain("ic");
  const auto& load = ic.action("load");
  for (const auto& s : all_focus_states(ic, 2)) {
    auto next = apply_variant(load.variants[0], load.params, {"t1", "d1"}, s);
    for (const char* shop : {"s1", "s2"}) {
      Atom e{"empty", {Term::constant(shop)}};
      EXPECT_EQ(next.holds(e), s.holds(e));
    }
    for (const char* l : {"s1", "s2", "d1"}) {
      Atom t{"tin", {Term::constant("t1"), Term::constant(l)}};
      EXPECT_EQ(next.holds(t), s.holds(t));
    }
  }
}

TEST(Dynamics, EventsCommute) {
  for (const char* name : {"ic", "aic"}) {
    auto d = builtin_domain(name);
    const auto& x = *d.exogenous;
    for (int n : {2, 3}) {
      for (const auto& s : enumerate_states(d, n)) {
        for (const auto& v1 : x.variants) {
          for (const auto& v2 : x.variants) {
            auto ab = apply_variant(v2, {x.param}, {"s2"}, apply_variant(v1, {x.param}, {"s1"}, s));
            auto ba = apply_variant(v1, {x.param}, {"s1"}, apply_variant(v2, {x.param}, {"s2"}, s));
            ASSERT_EQ(ab, ba) << name << " " << to_string(s);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace gfodd
