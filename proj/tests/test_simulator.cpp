#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gfodd/error.hpp"
#include "gfodd/simulator.hpp"

namespace gfodd {
namespace {

const DomainSpec& ic() {
  static const DomainSpec d = builtin_domain("ic");
  return d;
}

const PlanResult& ic_plan() {
  static const PlanResult r = plan(ic(), 4, all_focus_states(ic(), 2));
  return r;
}

GroundAction action(const std::string& schema, const std::vector<std::string>& objects) {
  GroundAction a{schema, {}};
  const auto& params = ic().action(schema).params;
  for (std::size_t k = 0; k < objects.size(); ++k) a.binding.bind(params[k], objects[k]);
  return a;
}

TEST(Greedy, UnloadsAtEmptyShop) {
  auto s = testing::domain_state(ic(), 2, {"tin t1 s1", "loaded t1", "empty s1"});
  // Q diagrams of V_1.
  auto q = sdp1(sdp2(ic_plan().values[1], ic()), ic()).q;
  auto choice = greedy_action(ic(), q, s);
  EXPECT_EQ(to_string(choice.action), "unload(t1, s1)");
  // One-step ground lookahead on V_1 agrees.
  auto m = build_ground_mdp(ic(), 2);
  auto v1 = tabulate(ic_plan().values[1], m.states);
  std::size_t si = m.index_of(s);
  std::size_t best = 0;
  Rational best_q;
  for (std::size_t a = 0; a < m.actions.size(); ++a) {
    Rational q_a;
    for (const auto& [j, p] : m.transitions[a][si]) q_a += p * v1[j];
    if (a == 0 || q_a > best_q) {
      best = a;
      best_q = q_a;
    }
  }
  EXPECT_EQ(m.actions[best], choice.action);
  auto vi = exact_vi(m, 1e-9);
  EXPECT_EQ(m.actions[vi.policy[si]], choice.action);
}

TEST(Greedy, TiesAreDeterministic) {
  // All shops full, truck at the depot: no action changes the expected next
  // reward, so every Q of V_0 ties.
  auto s = testing::domain_state(ic(), 2, {"tin t1 d1"});
  auto q = sdp1(sdp2(ic_plan().values[0], ic()), ic()).q;
  GreedyPolicy p(ic(), q);
  auto first = p.choose(s);
  for (const auto& [name, f] : q) EXPECT_EQ(eval_ve(f, s).value, first.value) << name;
  EXPECT_EQ(first.action.schema, "drive");
  GreedyPolicy again(ic(), q);
  EXPECT_EQ(again.choose(s).action, first.action);
}

TEST(Greedy, Errors) {
  auto q = ic_plan().greedy_q;
  q.erase("load");
  EXPECT_THROW(GreedyPolicy(ic(), q), ModelError);
  GreedyPolicy p(ic(), ic_plan().greedy_q);
  auto vocab = ic().vocab;
  Interpretation no_truck(std::make_shared<Universe>(vocab, std::vector<Object>{{"s1", "shop"}, {"d1", "depot"}}));
  EXPECT_THROW(p.choose(no_truck), EmptyDomainError);
}

TEST(Step, ArrivalRate) {
  auto s = testing::domain_state(ic(), 2, {"tin t1 d1"});
  Rng rng(2024);
  int emptied = 0;
  const int trials = 10000;
  for (int k = 0; k < trials; ++k) {
    auto r = step(ic(), s, action("load", {"t1", "d1"}), rng);
    emptied += r.next.holds(Atom{"empty", {Term::constant("s1")}});
    EXPECT_EQ(r.reward, 1);
  }
  EXPECT_NEAR(emptied / static_cast<double>(trials), 0.4, 0.02);
}

TEST(Step, RewardBeforeTransition) {
  auto s = testing::domain_state(ic(), 2, {"tin t1 s1", "loaded t1", "empty s1"});
  Rng rng(3);
  auto r = step(ic(), s, action("unload", {"t1", "s1"}), rng);
  EXPECT_EQ(r.reward, Rational(1, 2));
  EXPECT_FALSE(r.next.holds(Atom{"loaded", {Term::constant("t1")}}));
}

TEST(Step, LevelStatesStayConsistent) {
  auto aic = builtin_domain("aic");
  RandomPolicy p(aic);
  Rng rng(11);
  auto u = instance_universe(aic, 3);
  auto s = random_state(aic, u, rng);
  for (int t = 0; t < 2000; ++t) {
    s = step(aic, s, p.act(s, rng), rng).next;
    ASSERT_TRUE(is_consistent(aic, s));
  }
}

TEST(Rollouts, HorizonOneIsInitialReward) {
  RolloutConfig c;
  c.n = 3;
  c.instances = 5;
  c.runs = 3;
  c.horizon = 1;
  RandomPolicy random(ic());
  GreedyPolicy greedy(ic(), ic_plan().greedy_q);
  auto a = evaluate_policy(ic(), random, c);
  auto b = evaluate_policy(ic(), greedy, c);
  double expected = 0;
  for (const auto& inst : a.instances) expected += eval_ve(ic().reward, inst.initial).value.get_d();
  expected /= static_cast<double>(a.instances.size());
  EXPECT_NEAR(a.mean, expected, 1e-12);
  EXPECT_NEAR(b.mean, expected, 1e-12);
}

TEST(Rollouts, Deterministic) {
  RolloutConfig c;
  c.n = 3;
  c.instances = 4;
  c.runs = 5;
  c.horizon = 10;
  c.seed = 99;
  GreedyPolicy greedy(ic(), ic_plan().greedy_q);
  auto a = evaluate_policy(ic(), greedy, c);
  auto b = evaluate_policy(ic(), greedy, c);
  c.threads = 3;
  auto t = evaluate_policy(ic(), greedy, c);
  for (std::size_t k = 0; k < a.instances.size(); ++k) {
    EXPECT_EQ(a.instances[k].returns, b.instances[k].returns);
    EXPECT_EQ(a.instances[k].returns, t.instances[k].returns);
  }
  EXPECT_EQ(a.mean, t.mean);
  c.seed = 100;
  EXPECT_NE(evaluate_policy(ic(), greedy, c).mean, a.mean);
}

TEST(Rollouts, GreedyBeatsRandom) {
  RolloutConfig c;
  c.n = 4;
  c.instances = 6;
  c.runs = 10;
  GreedyPolicy greedy(ic(), ic_plan().greedy_q);
  RandomPolicy random(ic());
  EXPECT_GT(evaluate_policy(ic(), greedy, c).mean, evaluate_policy(ic(), random, c).mean);
}

TEST(Rollouts, Errors) {
  RandomPolicy random(ic());
  RolloutConfig c;
  c.horizon = 0;
  EXPECT_THROW(evaluate_policy(ic(), random, c), ArgumentError);
  auto m = std::make_shared<GroundMdp>(build_ground_mdp(ic(), 2));
  TabularPolicy tab(m, exact_vi(*m, 1e-6).policy);
  RolloutConfig wrong;
  wrong.n = 3;
  EXPECT_THROW(evaluate_policy(ic(), tab, wrong), ArgumentError);
}

TEST(Rollouts, TabularTableRoundTrip) {
  auto m = std::make_shared<GroundMdp>(build_ground_mdp(ic(), 2));
  auto table = exact_vi(*m, 1e-9).policy;
  TabularPolicy tab(m, table);
  EXPECT_EQ(policy_table(tab, *m), table);
}

}  // namespace
}  // namespace gfodd
