#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gfodd/error.hpp"
#include "gfodd/eval.hpp"
#include "gfodd/io.hpp"
#include "gfodd/reduce.hpp"

namespace gfodd {
namespace {

using testing::fixture_frex;
using testing::fixture_i2;

std::size_t internal_nodes(const Gfodd& f) {
  std::size_t n = 0;
  for (const auto& node : f.nodes()) n += !node.is_leaf;
  return n;
}

bool has_leaf(const Gfodd& f, const Rational& v) {
  for (const auto& n : f.nodes()) {
    if (n.is_leaf && n.value == v) return true;
  }
  return false;
}

TEST(Reduce, UnusedBonusPathGoesToZero) {
  auto i2 = fixture_i2();
  auto r = reduce_with_report(fixture_frex(), {i2});
  EXPECT_FALSE(has_leaf(r.diagram, Rational(1, 10)));
  EXPECT_FALSE(r.removed.empty());
  EXPECT_EQ(eval_brute(r.diagram, i2).value, Rational(1, 2));
  EXPECT_EQ(eval_brute(fixture_frex(), i2).value, Rational(1, 2));
  EXPECT_LE(internal_nodes(r.diagram), internal_nodes(fixture_frex()));
}

TEST(Reduce, ConstantAndIdempotent) {
  auto leaf = parse_diagram("(gfodd (agg) 3/4)");
  EXPECT_EQ(reduce_on(leaf, {fixture_i2()}), leaf);
  auto once = reduce_on(fixture_frex(), {fixture_i2()});
  EXPECT_EQ(reduce_on(once, {fixture_i2()}), once);
}

TEST(Reduce, EmptyFocusSet) { EXPECT_THROW(reduce_on(fixture_frex(), {}), ArgumentError); }

TEST(Reduce, ExactOnFocusLowerBoundElsewhere) {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    testing::RandomCases gen(seed);
    auto f = gen.random_diagram(2, 6);
    std::vector<Interpretation> focus;
    for (int k = 0; k < 3; ++k) focus.push_back(gen.random_state(1, 3));
    auto r = reduce_on(f, focus);
    EXPECT_LE(internal_nodes(r), internal_nodes(f));
    for (const auto& s : focus) EXPECT_EQ(eval_brute(r, s).value, eval_brute(f, s).value) << "seed " << seed;
    for (int k = 0; k < 5; ++k) {
      auto s = gen.random_state(1, 4);
      EXPECT_LE(eval_brute(r, s).value, eval_brute(f, s).value) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace gfodd
