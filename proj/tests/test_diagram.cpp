#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gfodd/error.hpp"
#include "gfodd/eval.hpp"
#include "gfodd/io.hpp"

namespace gfodd {
namespace {

using testing::fixture_fr;
using testing::fixture_frex;
using testing::fixture_i2;

Term var(const std::string& n, const std::string& s) { return Term::variable(n, s); }

TEST(AtomOrder, Examples) {
  OrderContext ctx(std::vector<Variable>{{"z1", "shop"}, {"z2", "shop"}, {"t", "truck"}, {"s", "shop"}, {"y", "shop"}});
  Atom empty_s{"empty", {var("s", "shop")}};
  Atom empty_y{"empty", {var("y", "shop")}};
  Atom tin{"tin", {var("t", "truck"), var("s", "shop")}};
  EXPECT_EQ(atom_order(empty_s, empty_s, ctx), std::strong_ordering::equal);
  EXPECT_EQ(atom_order(Atom::equality(var("z1", "shop"), var("z2", "shop")), empty_y, ctx), std::strong_ordering::less);
  EXPECT_EQ(atom_order(empty_y, tin, ctx), std::strong_ordering::less);
  // constants before variables, variables by position
  EXPECT_EQ(atom_order(Atom{"empty", {Term::constant("s1")}}, empty_s, ctx), std::strong_ordering::less);
  EXPECT_EQ(atom_order(empty_s, empty_y, ctx), std::strong_ordering::less);
  // equality orientation does not matter
  EXPECT_EQ(atom_order(Atom::equality(var("z2", "shop"), var("z1", "shop")),
                       Atom::equality(var("z1", "shop"), var("z2", "shop")), ctx),
            std::strong_ordering::equal);
}

TEST(Build, RewardExample) {
  auto f = fixture_frex();
  ASSERT_EQ(f.prefix().size(), 2u);
  EXPECT_EQ(f.prefix()[0].agg, Aggregator::Max);
  EXPECT_EQ(f.prefix()[1].agg, Aggregator::Avg);
  EXPECT_EQ(f.internal_count(), 2u);
  EXPECT_EQ(f.size(), 5u);  // two tests, leaves 0, 1/10, 1
  EXPECT_EQ(f.node(0).atom.predicate, "empty");
  EXPECT_TRUE(is_ordered(f));
  EXPECT_EQ(eval_brute(f, fixture_i2()).value, Rational(1, 2));
}

TEST(Build, ConstantAndReward) {
  auto one = build({}, Expr::leaf(1));
  EXPECT_TRUE(one.is_constant());
  EXPECT_EQ(one.node(0).value, 1);
  EXPECT_EQ(eval_brute(one, fixture_i2()).value, 1);
  auto fr = fixture_fr();
  EXPECT_EQ(fr.internal_count(), 1u);
  EXPECT_EQ(eval_brute(fr, fixture_i2()).value, Rational(1, 2));
}

TEST(Build, SharesIdenticalSubexpressions) {
  auto f = parse_diagram(
      "(gfodd (agg (max t truck) (avg s shop)) (if (empty s) (if (tin t s) 1 0) (if (loaded t) (if (tin t s) 1 0) 2)))");
  int tin_nodes = 0;
  for (const auto& n : f.nodes()) tin_nodes += (!n.is_leaf && n.atom.predicate == "tin");
  EXPECT_EQ(tin_nodes, 1);
}

TEST(Build, OrderViolationAndNegativeLeaf) {
  EXPECT_THROW(parse_diagram("(gfodd (agg (avg s shop)) (if (tin t1 s) (if (empty s) 1 0) 0))"), ConstructionError);
  EXPECT_THROW(parse_diagram("(gfodd (agg (avg s shop)) (if (empty s) -1 0))"), ValueError);
  // the lenient form re-sorts
  auto g = parse_diagram("(gfodd (agg (avg s shop)) (if (tin t1 s) (if (empty s) 1 0) 0))", false);
  EXPECT_TRUE(is_ordered(g));
  EXPECT_EQ(g.node(0).atom.predicate, "empty");
}

TEST(Build, UndeclaredVariableIsConstant) {
  // symbols not in the prefix are constants
  auto g = parse_diagram("(gfodd (agg) (if (empty s1) 1 0))");
  EXPECT_TRUE(g.node(0).atom.args[0].is_constant());
  EXPECT_EQ(eval_brute(g, fixture_i2()).value, 1);
}

TEST(Normalize, RedundantTestAndUnusedVariable) {
  auto f = parse_diagram("(gfodd (agg (avg y shop)) (if (empty y) 5 5))");
  auto n = normalize(f);
  EXPECT_TRUE(n.is_constant());
  EXPECT_EQ(n.node(0).value, 5);
  EXPECT_TRUE(n.prefix().empty());

  auto g = parse_diagram("(gfodd (agg (max z shop) (avg y shop)) (if (empty y) 0 1))");
  auto ng = normalize(g);
  ASSERT_EQ(ng.prefix().size(), 1u);
  EXPECT_EQ(ng.prefix()[0].var.name, "y");

  EXPECT_EQ(normalize(fixture_frex()), fixture_frex());
  EXPECT_EQ(normalize(normalize(g)), normalize(g));
}

TEST(StandardizeApart, RenamesSecondPrefix) {
  auto f = fixture_fr();
  auto [a, b] = standardize_apart(f, f);
  EXPECT_EQ(a, f);
  ASSERT_EQ(b.prefix().size(), 1u);
  EXPECT_NE(b.prefix()[0].var.name, "y");
  auto i2 = fixture_i2();
  EXPECT_EQ(eval_brute(a, i2).value, eval_brute(b, i2).value);

  auto c = build({}, Expr::leaf(3));
  auto [c1, f1] = standardize_apart(c, f);
  EXPECT_EQ(c1, c);
  EXPECT_EQ(f1, f);
}

TEST(StandardizeApart, ValuesUnchangedOnRandomStates) {
  testing::RandomCases gen(7);
  for (int i = 0; i < 50; ++i) {
    auto f = gen.random_diagram(2, 5);
    auto [a, b] = standardize_apart(f, f);
    for (const auto& e : a.prefix()) {
      for (const auto& g : b.prefix()) EXPECT_NE(e.var.name, g.var.name);
    }
    auto s = gen.random_state(1, 3);
    EXPECT_EQ(eval_brute(a, s).value, eval_brute(b, s).value);
  }
}

TEST(BindLift, RewardRoundTrip) {
  auto fr = fixture_fr();
  auto g = bind_variable(fr, "y", Term::constant("@a", "shop"));
  EXPECT_TRUE(g.prefix().empty());
  EXPECT_EQ(g.node(0).atom, (Atom{"empty", {Term::constant("@a")}}));
  auto back = lift_constant(g, Term::constant("@a"), {"y", "shop"}, Aggregator::Avg, 0);
  EXPECT_EQ(normalize(back), normalize(fr));
}

TEST(BindLift, RewardExampleStructure) {
  auto g = bind_variable(fixture_frex(), "s", Term::constant("@a", "shop"));
  ASSERT_EQ(g.prefix().size(), 1u);
  EXPECT_EQ(g.prefix()[0].var.name, "t");
  std::set<std::string> preds;
  for (const auto& n : g.nodes()) {
    if (n.is_leaf) continue;
    preds.insert(n.atom.predicate);
    for (const auto& t : n.atom.args) {
      if (t.is_constant()) EXPECT_EQ(t.name, "@a");
    }
  }
  EXPECT_EQ(preds, (std::set<std::string>{"empty", "tin"}));
}

TEST(BindLift, Errors) {
  auto fr = fixture_fr();
  EXPECT_THROW(bind_variable(fr, "q", Term::constant("@a")), ArgumentError);
  EXPECT_THROW(lift_constant(fr, Term::constant("@b"), {"w", "shop"}, Aggregator::Avg, 1), ArgumentError);
  auto g = bind_variable(fr, "y", Term::constant("@a", "shop"));
  EXPECT_THROW(lift_constant(g, Term::constant("@a"), {"@a", "shop"}, Aggregator::Avg, 0), ArgumentError);
}

TEST(BindLift, ValuePreservingOnRandomCases) {
  testing::RandomCases gen(11);
  for (int i = 0; i < 40; ++i) {
    auto p = gen.random_prefix(2);
    auto f = gen.random_diagram(p, 5);
    std::size_t pos = static_cast<std::size_t>(gen.pick(0, static_cast<int>(f.prefix().size()) - 1));
    auto e = f.prefix()[pos];
    if (!f.used_variables().count(e.var.name)) continue;
    auto g = bind_variable(f, e.var.name, Term::constant("@k", e.var.sort));
    auto h = lift_constant(g, Term::constant("@k"), e.var, e.agg, pos);
    auto s = gen.random_state(1, 3);
    EXPECT_EQ(eval_brute(h, s).value, eval_brute(f, s).value);
  }
}

TEST(DiagramText, RoundTrip) {
  testing::RandomCases gen(3);
  for (int i = 0; i < 60; ++i) {
    auto f = gen.random_diagram(2, 6);
    auto text = write_diagram(f);
    EXPECT_EQ(parse_diagram(text), f) << text;
  }
  auto f = fixture_frex();
  EXPECT_EQ(write_diagram(f),
            "(gfodd\n  (agg (max t truck) (avg s shop))\n  (if (empty s) (if (tin t s) 1/10 0) 1))\n");
}

TEST(DiagramText, NodeTableForSharedNodes) {
  auto f = parse_diagram("(gfodd (agg (avg s shop)) (nodes (0 (empty s) 1 2) (1 (tin t1 s) 3 4) (2 (loaded t1) 1 4) (3 2) (4 0)))");
  auto text = write_diagram(f);
  EXPECT_NE(text.find("(nodes"), std::string::npos);
  EXPECT_EQ(parse_diagram(text), f);
}

TEST(DiagramText, ParseErrorsCarryLocation) {
  try {
    parse_diagram("(gfodd\n  (agg (sum t truck))\n  1)");
    FAIL() << "expected parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 9);
  }
  EXPECT_THROW(parse_diagram("(gfodd (agg) (if (empty s1) 1)"), ParseError);
  EXPECT_THROW(parse_diagram("(gfodd (agg) 1"), ParseError);
}

TEST(Dot, TrueEdgesSolidAndFirst) {
  auto dot = to_dot(fixture_fr());
  EXPECT_NE(dot.find("ordering=out"), std::string::npos);
  auto t = dot.find("n0 -> n1 [label=\"t\"]");
  auto f = dot.find("n0 -> n2 [label=\"f\", style=dashed]");
  ASSERT_NE(t, std::string::npos) << dot;
  ASSERT_NE(f, std::string::npos) << dot;
  EXPECT_LT(t, f);
}

}  // namespace
}  // namespace gfodd
