#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ptl/traps.hpp"

using namespace ptl;

namespace {

struct TwoBasin {
  TrajectorySpace space = enumerate_trajectories(builtin_env(BuiltinEnv::TwoBasinFixture));
  Trap trap = detect_traps_strict(space).at(0);
};

// Random counting spaces whose totals are multiples of 1/8, so power-of-two
// scalings and small dyadic shifts are exact.
TrajectorySpace dyadic_space(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> d(0, 31);
  std::vector<CostVector> totals(5);
  for (auto& t : totals) t = {d(gen) / 8.0, d(gen) / 8.0};
  return enumerate_trajectories(counting_env("dyadic", 4, totals));
}

}  // namespace

TEST(EscapeDistance, TwoBasin) {
  TwoBasin tb;
  const double d = escape_distance(tb.space, tb.trap, Scalarization::uniform(2));
  EXPECT_NEAR(d, 2.0 / 3.0, 1e-9);
  const double hand = std::sqrt(0.5) / (std::sqrt(2.0) * 0.75);
  EXPECT_NEAR(d, hand, 1e-15);
}

TEST(EscapeDistance, CoincidentMemberAndWitness) {
  // AAB and ABA share the cost (1.5, 3); treat one as the other's witness
  TwoBasin tb;
  Trap t;
  t.mode = TrapMode::Strict;
  t.member_ids = {0, 1};
  t.witnesses = {2};
  EXPECT_EQ(escape_distance(tb.space, t, Scalarization::uniform(2)), 0.0);
}

TEST(EscapeDistance, Errors) {
  TwoBasin tb;
  Trap empty = tb.trap;
  empty.member_ids.clear();
  EXPECT_THROW(escape_distance(tb.space, empty, Scalarization::uniform(2)), std::invalid_argument);
  Trap no_witness = tb.trap;
  no_witness.witnesses.clear();
  EXPECT_THROW(escape_distance(tb.space, no_witness, Scalarization::uniform(2)), std::invalid_argument);
}

TEST(EscapeDistance, ZeroRangeObjectiveIsDroppedWithWarning) {
  const auto spec = counting_env("flat", 3, {{2, 7}, {1.5, 7}, {3, 7}, {1, 7}});
  const auto space = enumerate_trajectories(spec);
  Trap t;
  t.member_ids = {0};
  t.witnesses = {7};
  std::vector<std::string> warnings;
  const double d = escape_distance(space, t, Scalarization::uniform(2), &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("objective 2"), std::string::npos);
  EXPECT_DOUBLE_EQ(d, 0.5);  // J1 normalized: AAA 0.5, BBB 0, diameter 1
  EXPECT_EQ(tedi_for_trap(space, t).warnings, warnings);
}

TEST(EscapeDistance, ConfinementModes) {
  const auto spec = builtin_env(BuiltinEnv::A4DeterministicJump).with_horizon(6);
  const auto space = enumerate_trajectories(spec);
  const auto f = Scalarization::uniform(2);
  const auto planner = detect_trap_confinement(spec, PolicySpec::front_planner(), space);
  EXPECT_EQ(escape_distance(space, planner, f), 0.0);
  const auto pointwise = detect_trap_confinement(spec, PolicySpec::pointwise(), space);
  const double d = escape_distance(space, pointwise, f);
  EXPECT_GT(d, 0.0);
  EXPECT_LE(d, 1.0);
}

TEST(StructuralConstraint, Examples) {
  TwoBasin tb;
  EXPECT_NEAR(structural_constraint(tb.space, tb.trap), 0.75, 1e-12);

  // every exit from AAA improves both objectives
  const auto slope = enumerate_trajectories(counting_env("slope", 3, {{2, 2}, {1.5, 1.5}, {1.2, 1.2}, {1, 1}}));
  Trap downhill;
  downhill.member_ids = {0};
  downhill.boundary_edges = boundary_edges(slope, downhill.member_ids);
  ASSERT_EQ(downhill.boundary_edges.size(), 3u);
  EXPECT_EQ(structural_constraint(slope, downhill), 0.0);

  const auto isolated = enumerate_trajectories(builtin_env(BuiltinEnv::TwoBasinFixture), {.epsilon = 0});
  EXPECT_EQ(structural_constraint(isolated, detect_traps_strict(isolated).at(0)), 1.0);
}

TEST(BehavioralInertia, Examples) {
  EXPECT_EQ(behavioral_inertia(std::vector<double>{30, 0, 0}), 1.0);
  EXPECT_NEAR(behavioral_inertia(std::vector<double>{1, 1, 1}), 0.0, 1e-15);
  EXPECT_NEAR(behavioral_inertia(std::vector<double>{9, 3}), oracle::two_basin_inertia(), 1e-15);
  EXPECT_NEAR(behavioral_inertia(std::vector<double>{9, 3}), 0.1887218755408671, 1e-12);
  EXPECT_EQ(behavioral_inertia(std::vector<double>{4}), 1.0);
  EXPECT_THROW(behavioral_inertia(std::vector<double>{0, 0}), std::invalid_argument);
  EXPECT_THROW(behavioral_inertia(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(behavioral_inertia(std::vector<double>{1, -1}), std::invalid_argument);
}

TEST(BehavioralInertia, PermutationInvariant) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> d(0, 20);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> f(4);
    for (auto& v : f) v = d(gen);
    f[0] += 1;
    const double b = behavioral_inertia(f);
    ASSERT_GE(b, 0.0);
    ASSERT_LE(b, 1.0);
    std::sort(f.begin(), f.end());
    do {
      ASSERT_NEAR(behavioral_inertia(f), b, 1e-15);
    } while (std::next_permutation(f.begin(), f.end()));
  }
}

TEST(Tedi, Examples) {
  for (const auto& w : {TediWeights::uniform(), TediWeights::make(1, 2, 3), TediWeights::make(0, 0, 1)}) {
    const auto lo = tedi(0, 0, 0, w);
    EXPECT_EQ(lo.value, 0.0);
    EXPECT_EQ(lo.category, EscapeCategory::Trivial);
    const auto hi = tedi(1, 1, 1, w);
    EXPECT_EQ(hi.value, 1.0);
    EXPECT_EQ(hi.category, EscapeCategory::PracticallyInescapable);
  }
  const auto r = tedi(2.0 / 3.0, 0.75, oracle::two_basin_inertia());
  EXPECT_NEAR(r.value, 0.5351, 1e-4);
  EXPECT_EQ(r.category, EscapeCategory::Hard);
  EXPECT_THROW(tedi(1.1, 0, 0), std::invalid_argument);
  EXPECT_THROW(tedi(0, -0.1, 0), std::invalid_argument);
  EXPECT_THROW(tedi(0, 0, std::nan("")), std::invalid_argument);
}

TEST(Tedi, CategoryBoundariesGoToHarder) {
  EXPECT_EQ(categorize(std::nextafter(0.25, 0.0)), EscapeCategory::Trivial);
  EXPECT_EQ(categorize(0.25), EscapeCategory::Moderate);
  EXPECT_EQ(categorize(0.5), EscapeCategory::Hard);
  EXPECT_EQ(categorize(0.75), EscapeCategory::PracticallyInescapable);
  EXPECT_EQ(to_string(EscapeCategory::PracticallyInescapable), "PracticallyInescapable");
}

TEST(Tedi, Weights) {
  EXPECT_EQ(TediWeights::make(2, 2, 4), TediWeights::make(0.25, 0.25, 0.5, false));
  EXPECT_THROW(TediWeights::make(0.5, 0.5, 0.5, false), std::invalid_argument);
  EXPECT_THROW(TediWeights::make(-1, 1, 1), std::invalid_argument);
  EXPECT_THROW(TediWeights::make(0, 0, 0), std::invalid_argument);

  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen), g = u(gen), d = u(gen), s = u(gen), in = u(gen);
    const double base = tedi(d, s, in, TediWeights::make(a, b, g)).value;
    // power-of-two scalings are exact
    ASSERT_EQ(tedi(d, s, in, TediWeights::make(8 * a, 8 * b, 8 * g)).value, base);
    ASSERT_NEAR(tedi(d, s, in, TediWeights::make(3.7 * a, 3.7 * b, 3.7 * g)).value, base, 1e-15);
  }
}

TEST(Tedi, TwoBasinComposition) {
  TwoBasin tb;
  const auto composed = tedi_for_trap(tb.space, tb.trap);
  const auto f = Scalarization::uniform(2);
  const auto manual =
      tedi(escape_distance(tb.space, tb.trap, f), structural_constraint(tb.space, tb.trap),
           behavioral_inertia(ActionStats::of_members(tb.space, tb.trap.member_ids).action_counts));
  EXPECT_EQ(composed.value, manual.value);
  EXPECT_EQ(composed.escape_distance, manual.escape_distance);
  EXPECT_NEAR(composed.escape_distance, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(composed.structural, 0.75, 1e-9);
  EXPECT_NEAR(composed.inertia, oracle::two_basin_inertia(), 1e-9);
  EXPECT_NEAR(composed.value, (2.0 / 3.0 + 0.75 + oracle::two_basin_inertia()) / 3.0, 1e-9);
  EXPECT_EQ(composed.category, EscapeCategory::Hard);
  EXPECT_TRUE(composed.warnings.empty());
}

TEST(Tedi, A4PointwiseConfinement) {
  const auto spec = builtin_env(BuiltinEnv::A4DeterministicJump).with_horizon(6);
  const auto space = enumerate_trajectories(spec);
  const auto trap = detect_trap_confinement(spec, PolicySpec::pointwise(), space);
  const auto r = tedi_for_trap(space, trap);
  EXPECT_EQ(r.inertia, 1.0);
  EXPECT_GE(r.value, 0.0);
  EXPECT_LE(r.value, 1.0);
}

TEST(Tedi, RangeAndMonotonicity) {
  std::mt19937_64 gen(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto w = TediWeights::make(u(gen) + 1e-9, u(gen), u(gen));
    double c[3] = {u(gen), u(gen), u(gen)};
    const double v = tedi(c[0], c[1], c[2], w).value;
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    for (int k = 0; k < 3; ++k) {
      double up[3] = {c[0], c[1], c[2]};
      up[k] = c[k] + (1.0 - c[k]) * u(gen);
      ASSERT_GE(tedi(up[0], up[1], up[2], w).value, v);
    }
  }
}

TEST(Tedi, DistanceAndStructureAffineInvariant) {
  std::mt19937_64 gen(99);
  const auto f = Scalarization::uniform(2);
  std::size_t checked = 0;
  for (int round = 0; round < 400; ++round) {
    const auto space = dyadic_space(gen);
    for (const auto& trap : detect_traps_strict(space)) {
      ++checked;
      const double d = escape_distance(space, trap, f), s = structural_constraint(space, trap);
      auto exact = space, general = space;
      for (auto& c : exact.costs) c = {4.0 * c[0] + 3.0, 0.5 * c[1] - 1.25};
      for (auto& c : general.costs) c = {3.7 * c[0] + 1.3, 0.11 * c[1] - 42.0};
      ASSERT_EQ(escape_distance(exact, trap, f), d);
      ASSERT_EQ(structural_constraint(exact, trap), s);
      ASSERT_NEAR(escape_distance(general, trap, f), d, 1e-12);
      ASSERT_NEAR(structural_constraint(general, trap), s, 1e-12);
    }
  }
  EXPECT_GT(checked, 50u);
}
