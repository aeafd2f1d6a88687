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

// Three unsorted objects a, b, c with p = {a, b}, q = {(b,a), (c,a)},
// r = {(b,a), (c,a)}; the diagram below reproduces the worked evaluation
// (blocks with values 3, 2, 2 and edge sets 1t2f3t3f / 1f3t3f).
struct ThreeObjectExample {
  Interpretation state;
  Gfodd diagram;
};

ThreeObjectExample three_object_example() {
  auto vocab = std::make_shared<Vocabulary>();
  vocab->add_sort({"o", {}});
  vocab->add_predicate({"p", {"o"}, false});
  vocab->add_predicate({"q", {"o", "o"}, false});
  vocab->add_predicate({"r", {"o", "o"}, false});
  Interpretation s(std::make_shared<Universe>(vocab, std::vector<Object>{{"a", "o"}, {"b", "o"}, {"c", "o"}}));
  auto c = [](const char* n) { return Term::constant(n); };
  s.set(Atom{"p", {c("a")}}, true);
  s.set(Atom{"p", {c("b")}}, true);
  s.set(Atom{"q", {c("b"), c("a")}}, true);
  s.set(Atom{"q", {c("c"), c("a")}}, true);
  s.set(Atom{"r", {c("b"), c("a")}}, true);
  s.set(Atom{"r", {c("c"), c("a")}}, true);
  auto f = parse_diagram(
      "(gfodd (agg (max x1 o) (max x2 o) (avg x3 o))"
      " (nodes (0 (p x2) 1 2) (1 (q x1 x2) 4 2) (2 (r x2 x3) 5 3) (3 2) (4 1) (5 3)))");
  return {s, f};
}

TEST(EvalBrute, RewardOnFixture) {
  auto r = eval_brute(fixture_fr(), fixture_i2());
  EXPECT_EQ(r.value, Rational(1, 2));
  EXPECT_EQ(r.edges, (EdgeSet{{0, true}, {0, false}}));
  EXPECT_EQ(r.work, 2u);
}

TEST(EvalBrute, RewardExampleWinner) {
  auto r = eval_brute(fixture_frex(), fixture_i2());
  EXPECT_EQ(r.value, Rational(1, 2));
  ASSERT_EQ(r.winner.size(), 1u);
  EXPECT_EQ(r.winner.bindings[0].first.name, "t");
  EXPECT_EQ(r.winner.bindings[0].second, "t1");
}

TEST(EvalBrute, ThreeObjectExample) {
  auto ex = three_object_example();
  auto r = eval_brute(ex.diagram, ex.state);
  EXPECT_EQ(r.work, 27u);
  EXPECT_EQ(r.value, Rational(7, 3));
  EXPECT_EQ(r.edges, (EdgeSet{{0, false}, {2, true}, {2, false}}));
  EXPECT_EQ(to_string(r.winner), "{x1->a, x2->c}");
}

TEST(EvalBrute, EmptySort) {
  auto vocab = testing::inventory_vocabulary();
  Interpretation s(std::make_shared<Universe>(vocab, std::vector<Object>{{"t1", "truck"}}));
  EXPECT_THROW(eval_brute(fixture_fr(), s), EmptyDomainError);
  EXPECT_THROW(eval_ve(fixture_fr(), s), EmptyDomainError);
}

TEST(EvalVe, MatchesExamples) {
  auto i2 = fixture_i2();
  for (const auto& f : {fixture_fr(), fixture_frex()}) {
    auto a = eval_brute(f, i2);
    auto b = eval_ve(f, i2);
    EXPECT_TRUE(same_outcome(a, b)) << to_string(a.edges) << " vs " << to_string(b.edges);
  }
  auto ex = three_object_example();
  auto b = eval_ve(ex.diagram, ex.state);
  EXPECT_EQ(b.value, Rational(7, 3));
  EXPECT_EQ(b.edges, (EdgeSet{{0, false}, {2, true}, {2, false}}));
  EXPECT_EQ(to_string(b.winner), "{x1->a, x2->c}");
}

TEST(EvalVe, NodeStatistics) {
  auto ex = three_object_example();
  VeEvaluator ev(ex.diagram);
  ASSERT_TRUE(ev.uses_elimination());
  EXPECT_TRUE(ev.stats(0).above.empty());
  EXPECT_EQ(ev.stats(0).self, std::vector<int>{1});
  EXPECT_EQ(ev.stats(1).above, std::vector<int>{1});
  EXPECT_EQ(ev.stats(2).above, (std::vector<int>{0, 1}));
  EXPECT_EQ(ev.stats(2).maxvar, 2);
  EXPECT_EQ(ev.stats(2).maxabove, 1);
}

TEST(EvalVe, OtherPrefixShapesFallBack) {
  auto f = parse_diagram("(gfodd (agg (avg s shop) (max t truck)) (if (empty s) (if (tin t s) 1/10 0) 1))");
  VeEvaluator ev(f);
  EXPECT_FALSE(ev.uses_elimination());
  EXPECT_TRUE(same_outcome(ev.evaluate(fixture_i2()), eval_brute(f, fixture_i2())));
}

TEST(EvalVe, FuzzAgainstBruteForce) {
  int mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    testing::RandomCases gen(seed);
    auto f = gen.random_diagram(2, 6);
    auto s = gen.random_state(1, 4);
    auto a = eval_brute(f, s);
    auto b = eval_ve(f, s);
    if (!same_outcome(a, b)) {
      ++mismatches;
      ADD_FAILURE() << "seed " << seed << "\n" << write_diagram(f) << write_state(s) << "\nbrute " << to_string(a.value)
                    << " " << to_string(a.winner) << " " << to_string(a.edges) << "\nve    " << to_string(b.value)
                    << " " << to_string(b.winner) << " " << to_string(b.edges);
    }
  }
  EXPECT_EQ(mismatches, 0);
}

EvalTable one_column(std::vector<EvalEntry> rows) {
  EvalTable t;
  t.columns = {1};
  t.extent = {rows.size()};
  t.entries = std::move(rows);
  return t;
}

EvalEntry row(EvalPool& pool, const Rational& v, const EdgeSet& e) {
  EvalEntry r;
  r.present = true;
  r.value = pool.value(v);
  r.edges = pool.edges(e);
  r.winner = pool.winner({-1, -1});
  return r;
}

TEST(AggregateOut, AverageUnionsEdges) {
  EvalPool pool;
  auto t = one_column({row(pool, 0, {{1, true}}), row(pool, 1, {{1, false}})});
  auto out = aggregate_out(pool, t, 1, 2, Aggregator::Avg);
  ASSERT_TRUE(out.columns.empty());
  ASSERT_EQ(out.entries.size(), 1u);
  EXPECT_EQ(pool.value_of(out.entries[0].value), Rational(1, 2));
  EXPECT_EQ(pool.edges_of(out.entries[0].edges), (EdgeSet{{1, true}, {1, false}}));
}

TEST(AggregateOut, MaxPrefersSmallerEdgeSet) {
  EvalPool pool;
  EdgeSet big{{1, true}, {2, false}, {3, true}, {3, false}};
  EdgeSet small{{1, false}, {3, true}, {3, false}};
  auto t = one_column({row(pool, Rational(7, 3), big), row(pool, Rational(7, 3), small)});
  auto out = aggregate_out(pool, t, 1, 2, Aggregator::Max);
  EXPECT_EQ(pool.edges_of(out.entries[0].edges), small);
  EXPECT_EQ(pool.winner_of(out.entries[0].winner)[1], 1);
}

TEST(AggregateOut, SingleRowAndImplicit) {
  EvalPool pool;
  auto t = one_column({row(pool, 3, {{0, true}})});
  for (auto agg : {Aggregator::Avg, Aggregator::Max}) {
    auto out = aggregate_out(pool, t, 1, 1, agg);
    EXPECT_EQ(pool.value_of(out.entries[0].value), 3);
    EXPECT_EQ(pool.edges_of(out.entries[0].edges), (EdgeSet{{0, true}}));
  }
  auto implicit = aggregate_out(pool, t, 0, 4, Aggregator::Max);
  EXPECT_EQ(implicit.columns, std::vector<int>{1});
  EXPECT_EQ(pool.winner_of(implicit.entries[0].winner)[0], 0);
}

TEST(AggregateOut, IncompleteAverageGroup) {
  EvalPool pool;
  auto t = one_column({row(pool, 0, {}), EvalEntry{}});
  EXPECT_THROW(aggregate_out(pool, t, 1, 2, Aggregator::Avg), InternalError);
}

TEST(EvalPool, InterningIsStable) {
  EvalPool pool;
  EXPECT_EQ(pool.value(Rational(0)), 0u);
  EXPECT_EQ(pool.edges(EdgeSet{}), 0u);
  auto a = pool.edges(EdgeSet{{1, true}});
  EXPECT_EQ(pool.add_edge(0, EdgeId{1, true}), a);
  EXPECT_EQ(pool.unite_edges(a, a), a);
  EXPECT_EQ(pool.value(Rational(2, 4)), pool.value(Rational(1, 2)));
}

}  // namespace
}  // namespace gfodd
