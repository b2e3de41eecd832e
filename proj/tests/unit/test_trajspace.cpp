#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "ptl/trajspace.hpp"

using namespace ptl;

namespace {

std::vector<int> repeat(int action, int n) { return std::vector<int>(static_cast<std::size_t>(n), action); }

}  // namespace

TEST(Accumulate, A4AllExploit) {
  const auto a4 = builtin_env(BuiltinEnv::A4Stochastic);
  const auto traj = replay(a4, repeat(0, 30));
  const auto j = accumulate(a4, traj);
  EXPECT_EQ(j, (CostVector{3.0, 30.0}));
}

TEST(Accumulate, CorrectlyRounded) {
  // naive left-to-right summation of 0.1 thirty times gives 3.0000000000000013
  detail::ExactSum s;
  for (int i = 0; i < 30; ++i) s.add(0.1);
  EXPECT_EQ(s.value(), 3.0);
  detail::ExactSum t;
  for (double v : {1e100, 1.0, -1e100}) t.add(v);
  EXPECT_EQ(t.value(), 1.0);
  EXPECT_EQ(detail::ExactSum{}.value(), 0.0);
}

TEST(Accumulate, EmptyTrajectoryIsZero) {
  for (const auto& n : builtin_env_names()) {
    const auto spec = builtin_env(n);
    EXPECT_EQ(accumulate(spec, Trajectory{{0}, {}}), CostVector(spec.num_objectives(), 0.0));
  }
}

TEST(Accumulate, ExploreThenExploit) {
  const auto a4 = builtin_env(BuiltinEnv::A4Stochastic);
  const auto j = accumulate(a4, replay(a4, {1, 0}));
  EXPECT_NEAR(j[0], 0.95, 1e-12);
  EXPECT_NEAR(j[1], 2.5, 1e-12);
}

TEST(Accumulate, Errors) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  EXPECT_THROW(accumulate(a3, Trajectory{{0, 1}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(accumulate(a3, Trajectory{{0, 3}, {1}}), std::invalid_argument);
  EXPECT_THROW(accumulate(a3, Trajectory{{7, 7}, {0}}), std::out_of_range);
  // stochastic specs accept any recorded successor
  const auto a4 = builtin_env(BuiltinEnv::A4Stochastic);
  EXPECT_NO_THROW(accumulate(a4, Trajectory{{0, 4}, {2}}));
}

TEST(Accumulate, StartStateOtherThanZero) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  const auto traj = replay(a3, {0, 0}, 2);
  EXPECT_EQ(traj.states, (std::vector<int>{2, 2, 2}));
  EXPECT_NEAR(accumulate(a3, traj)[1], 2.0 / 3.0, 1e-12);
}

TEST(Accumulate, AdditiveOverConcatenation) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  std::mt19937_64 gen(3);
  for (int round = 0; round < 500; ++round) {
    const int T = 1 + static_cast<int>(gen() % 12);
    std::vector<int> acts;
    for (int t = 0; t < T; ++t) acts.push_back(static_cast<int>(gen() % 3));
    const auto whole = replay(a3, acts);
    const int cut = static_cast<int>(gen() % static_cast<std::uint64_t>(T + 1));
    const auto head = replay(a3, std::vector<int>(acts.begin(), acts.begin() + cut));
    const auto tail = replay(a3, std::vector<int>(acts.begin() + cut, acts.end()), head.final_state());
    const auto j = accumulate(a3, whole), jh = accumulate(a3, head), jt = accumulate(a3, tail);
    for (std::size_t k = 0; k < 2; ++k) ASSERT_NEAR(j[k], jh[k] + jt[k], 1e-12);
  }
}

TEST(Rollout, PointwiseNeverLeavesZero) {
  const auto a4 = builtin_env(BuiltinEnv::A4Stochastic);
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 123456789ull}) {
    const auto traj = rollout(a4, PolicySpec::pointwise(), seed);
    EXPECT_EQ(traj.states, std::vector<int>(31, 0));
    EXPECT_EQ(traj.actions, repeat(0, 30));
  }
}

TEST(Rollout, SeedDeterminism) {
  const auto a4 = builtin_env(BuiltinEnv::A4Stochastic);
  const auto a = rollout(a4, PolicySpec::random(), 2024);
  EXPECT_EQ(a, rollout(a4, PolicySpec::random(), 2024));
  EXPECT_NE(a, rollout(a4, PolicySpec::random(), 2025));
}

TEST(Rollout, AlwaysRestructureOnA3) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  const auto traj = rollout(a3, PolicySpec::trajectory(1.0), 0);
  EXPECT_EQ(traj.actions, repeat(2, 30));
  EXPECT_EQ(std::vector<int>(traj.states.begin(), traj.states.begin() + 6), (std::vector<int>{0, 2, 4, 5, 5, 5}));
  EXPECT_EQ(traj.final_state(), 5);
}

TEST(Rollout, FrontPlannerNeedsDeterministicSpec) {
  const auto a4 = builtin_env(BuiltinEnv::A4Stochastic);
  EXPECT_THROW(rollout(a4, PolicySpec::front_planner(), 0), infeasible_error);
  const auto tb = builtin_env(BuiltinEnv::TwoBasinFixture);
  EXPECT_EQ(rollout(tb, PolicySpec::front_planner(), 0).actions, (std::vector<int>{1, 1, 1}));
}

TEST(Hamming, Examples) {
  const auto a4 = builtin_env(BuiltinEnv::A4DeterministicJump);
  const auto all_exploit = replay(a4, repeat(0, 6));
  auto edited = repeat(0, 6);
  edited[0] = 1;
  EXPECT_EQ(hamming(all_exploit, all_exploit), 0u);
  EXPECT_EQ(hamming(all_exploit, replay(a4, edited)), 1u);
  const auto tb = builtin_env(BuiltinEnv::TwoBasinFixture);
  EXPECT_EQ(hamming(replay(tb, repeat(0, 3)), replay(tb, repeat(1, 3))), 3u);
  EXPECT_THROW(hamming(all_exploit, replay(a4, repeat(0, 5))), std::invalid_argument);
}

TEST(Hamming, IsAMetric) {
  std::mt19937_64 gen(17);
  auto rand_traj = [&] {
    Trajectory t;
    for (int i = 0; i < 8; ++i) t.actions.push_back(static_cast<int>(gen() % 3));
    return t;
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = rand_traj(), b = rand_traj(), c = rand_traj();
    ASSERT_EQ(hamming(a, b), hamming(b, a));
    ASSERT_EQ(hamming(a, b) == 0, a.actions == b.actions);
    ASSERT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
  }
}

TEST(Enumerate, Counts) {
  const auto a4 = builtin_env(BuiltinEnv::A4DeterministicJump);
  EXPECT_EQ(enumerate_trajectories(a4, {.horizon = 2}).size(), 9u);
  EXPECT_EQ(enumerate_trajectories(a4, {.horizon = 6}).size(), 729u);
  EXPECT_EQ(enumerate_trajectories(a4, {.horizon = 0}).size(), 1u);
}

TEST(Enumerate, TwoBasinCosts) {
  const auto space = enumerate_trajectories(builtin_env(BuiltinEnv::TwoBasinFixture));
  ASSERT_EQ(space.size(), 8u);
  for (std::size_t id = 0; id < 8; ++id) {
    const int b = __builtin_popcount(static_cast<unsigned>(id));
    const CostVector expected[] = {{2, 2}, {1.5, 3}, {3, 1.5}, {1, 1}};
    EXPECT_EQ(space.costs[id], expected[b]) << id;
  }
}

TEST(Enumerate, StochasticIsInfeasible) {
  EXPECT_THROW(enumerate_trajectories(builtin_env(BuiltinEnv::A4Stochastic)), infeasible_error);
}

TEST(Enumerate, CapIsEnforced) {
  const auto a4 = builtin_env(BuiltinEnv::A4DeterministicJump);
  EXPECT_THROW(enumerate_trajectories(a4), infeasible_error);  // 3^30
  EXPECT_THROW(enumerate_trajectories(a4, {.horizon = 5, .cap = 100}), infeasible_error);
  EXPECT_NO_THROW(enumerate_trajectories(a4, {.horizon = 4, .cap = 81}));
}

TEST(Enumerate, LexicographicIdsAndReplay) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  const auto space = enumerate_trajectories(a3, {.horizon = 4});
  for (std::size_t id = 0; id < space.size(); ++id) {
    const auto& t = space.trajectories[id];
    ASSERT_EQ(space.find(t.actions), id);
    ASSERT_EQ(t, replay(a3, t.actions));
    ASSERT_EQ(space.costs[id], accumulate(a3, t));
    if (id > 0) {
      ASSERT_LT(space.trajectories[id - 1].actions, t.actions);
    }
  }
  EXPECT_FALSE(space.find({0, 0, 0}));
  EXPECT_FALSE(space.find({0, 0, 0, 3}));
}

TEST(Enumerate, ThreadCountDoesNotChangeResult) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  const auto one = enumerate_trajectories(a3, {.horizon = 7, .threads = 1});
  const auto many = enumerate_trajectories(a3, {.horizon = 7, .threads = 5});
  EXPECT_EQ(one.trajectories, many.trajectories);
  EXPECT_EQ(one.costs, many.costs);
}

TEST(Neighbors, EditGenerationMatchesScan) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  for (int eps : {0, 1, 2, 3}) {
    const auto complete = enumerate_trajectories(a3, {.horizon = 4, .epsilon = eps});
    auto scanned = make_space(a3, complete.trajectories, eps);
    ASSERT_FALSE(scanned.complete);
    for (std::size_t id = 0; id < complete.size(); ++id) {
      const auto fast = complete.neighbors(id);
      ASSERT_EQ(fast, scanned.neighbors(id)) << "eps=" << eps << " id=" << id;
      for (auto n : fast) ASSERT_LE(oracle::hamming(complete.trajectories[id].actions, complete.trajectories[n].actions),
                                    static_cast<std::size_t>(eps));
    }
  }
}

TEST(Neighbors, Symmetric) {
  const auto space = enumerate_trajectories(builtin_env(BuiltinEnv::A3Deterministic), {.horizon = 4, .epsilon = 2});
  for (std::size_t i = 0; i < space.size(); ++i)
    for (auto j : space.neighbors(i)) {
      const auto back = space.neighbors(j);
      ASSERT_TRUE(std::binary_search(back.begin(), back.end(), i));
    }
  EXPECT_THROW(space.neighbors(space.size()), std::out_of_range);
}

TEST(MakeSpace, Errors) {
  const auto a3 = builtin_env(BuiltinEnv::A3Deterministic);
  EXPECT_THROW(make_space(a3, {replay(a3, {0}), replay(a3, {0, 0})}), std::invalid_argument);
  EXPECT_THROW(make_space(a3, {}, -1), std::invalid_argument);
}
