#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gfodd/apply.hpp"
#include "gfodd/error.hpp"
#include "gfodd/eval.hpp"
#include "gfodd/io.hpp"

namespace gfodd {
namespace {

using testing::fixture_fr;
using testing::fixture_frex;
using testing::fixture_i2;

Rational value(const Gfodd& f, const Interpretation& s) { return eval_brute(f, s).value; }

std::vector<Interpretation> two_shop_states() { return all_focus_states(builtin_domain("ic"), 2); }

// Objects a, b, c of sort o with p = {a}, q = {b}: (if (p y) 1 (if (q y) 2 3))
// takes the values 1, 2, 3.
struct ThreeValues {
  Interpretation state;
  Gfodd one_two_three;
  Gfodd two;
};

ThreeValues three_values() {
  auto vocab = std::make_shared<Vocabulary>();
  vocab->add_sort({"o", {}});
  vocab->add_predicate({"p", {"o"}, false});
  vocab->add_predicate({"q", {"o"}, false});
  Interpretation s(std::make_shared<Universe>(vocab, std::vector<Object>{{"a", "o"}, {"b", "o"}, {"c", "o"}}));
  s.set(Atom{"p", {Term::constant("a")}}, true);
  s.set(Atom{"q", {Term::constant("b")}}, true);
  return {s, parse_diagram("(gfodd (agg (avg y o)) (if (p y) 1 (if (q y) 2 3)))"),
          as_a4(parse_diagram("(gfodd (agg) 2)"), "o")};
}

TEST(Apply, LeafArithmetic) {
  auto two = parse_diagram("(gfodd (agg) 2)");
  auto three = parse_diagram("(gfodd (agg) 3)");
  auto zero = parse_diagram("(gfodd (agg) 0)");
  auto sum = apply_open(ApplyOp::Add, two, three);
  ASSERT_TRUE(sum.is_constant());
  EXPECT_EQ(sum.node(0).value, 5);
  auto product = apply_open(ApplyOp::Multiply, fixture_frex(), zero);
  ASSERT_TRUE(product.is_constant());
  EXPECT_EQ(product.node(0).value, 0);
}

TEST(Apply, SharedBodyOnFixture) {
  auto sum = apply_open(ApplyOp::Add, fixture_fr(), fixture_fr());
  EXPECT_EQ(value(sum, fixture_i2()), 1);
}

TEST(Apply, DisjointPrefixesArePointwise) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    testing::RandomCases gen(seed);
    auto [f, g] = standardize_apart(gen.random_diagram(1, 4), gen.random_diagram(1, 4));
    auto s = gen.random_state(1, 3);
    auto fv = value(f, s);
    auto gv = value(g, s);
    EXPECT_EQ(value(apply_open(ApplyOp::Add, f, g), s), fv + gv) << "seed " << seed;
    EXPECT_EQ(value(apply_open(ApplyOp::Multiply, f, g), s), fv * gv) << "seed " << seed;
  }
}

TEST(AddSharedAvg, Examples) {
  auto i2 = fixture_i2();
  EXPECT_EQ(value(add_shared_avg(fixture_fr(), fixture_fr()), i2), 1);
  EXPECT_EQ(value(add_shared_avg(fixture_frex(), fixture_fr()), i2), 1);
  auto zero = as_a4(parse_diagram("(gfodd (agg) 0)"), "shop");
  auto same = add_shared_avg(fixture_fr(), zero);
  for (const auto& s : two_shop_states()) EXPECT_EQ(value(same, s), value(fixture_fr(), s));
}

TEST(AddSharedAvg, RandomizedSum) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    testing::RandomCases gen(seed);
    auto f = gen.random_diagram(2, 5);
    auto g = gen.random_prefix(2);
    g.back().var.sort = f.prefix().back().var.sort;
    auto gd = gen.random_diagram(g, 5);
    auto s = gen.random_state(1, 3);
    EXPECT_EQ(value(add_shared_avg(f, gd), s), value(f, s) + value(gd, s)) << "seed " << seed;
  }
}

TEST(AddSharedAvg, RejectsOtherForms) {
  auto bad = parse_diagram("(gfodd (agg (avg s shop) (max t truck)) (if (tin t s) 1 0))");
  EXPECT_THROW(add_shared_avg(bad, fixture_fr()), FormError);
  EXPECT_THROW(max_expr(fixture_fr(), bad), FormError);
}

TEST(Scale, Examples) {
  EXPECT_EQ(value(scale(fixture_fr(), Rational(9, 10)), fixture_i2()), Rational(9, 20));
  EXPECT_EQ(scale(fixture_frex(), 1), fixture_frex());
  auto zero = scale(fixture_frex(), 0);
  ASSERT_TRUE(zero.is_constant());
  EXPECT_EQ(zero.node(0).value, 0);
  EXPECT_THROW(scale(fixture_fr(), -1), ValueError);
}

TEST(MaxExpr, MaxWithAverageIsNotLeafwise) {
  auto ex = three_values();
  EXPECT_EQ(value(ex.one_two_three, ex.state), 2);
  // 2 + avg{1,2,3} = avg{3,4,5}
  EXPECT_EQ(value(add_shared_avg(ex.two, ex.one_two_three), ex.state), 4);
  // Leafwise max under the shared average would give avg{2,2,3}.
  EXPECT_EQ(value(apply_open(ApplyOp::Max, ex.two, ex.one_two_three), ex.state), Rational(7, 3));
  EXPECT_EQ(value(max_expr(ex.two, ex.one_two_three), ex.state), 2);
  EXPECT_EQ(eval_ve(max_expr(ex.two, ex.one_two_three), ex.state).value, 2);
}

TEST(MaxExpr, IdempotentAndZero) {
  auto zero = as_a4(parse_diagram("(gfodd (agg) 0)"), "shop");
  for (const auto& s : two_shop_states()) {
    EXPECT_EQ(value(max_expr(fixture_frex(), fixture_frex()), s), value(fixture_frex(), s));
    EXPECT_EQ(value(max_expr(fixture_fr(), zero), s), value(fixture_fr(), s));
  }
}

TEST(MaxExpr, RandomizedMax) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    testing::RandomCases gen(seed);
    auto f = gen.random_diagram(2, 5);
    auto p = gen.random_prefix(2);
    p.back().var.sort = f.prefix().back().var.sort;
    auto g = gen.random_diagram(p, 5);
    auto s = gen.random_state(2, 3);
    EXPECT_EQ(value(max_expr(f, g), s), std::max(value(f, s), value(g, s))) << "seed " << seed;
  }
}

}  // namespace
}  // namespace gfodd
