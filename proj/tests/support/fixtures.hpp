#pragma once

#include <random>

#include "ptl/env.hpp"

namespace fixture {

// Ten locally optimal sequences (one or two B's out of four) packed into a
// small corner of cost space, all dominated by BBBA-style sequences at (0, 0)
// and walled off by the (6, 6) three-B level.
inline ptl::EnvironmentSpec plateau() {
  return ptl::counting_env("plateau", 4, {{5.5, 5.5}, {5.0, 5.2}, {5.2, 5.0}, {6.0, 6.0}, {0.0, 0.0}});
}

// Every total is incomparable with every other: the whole space is the front.
inline ptl::EnvironmentSpec antichain() { return ptl::counting_env("antichain", 3, {{0, 3}, {1, 2}, {2, 1}, {3, 0}}); }

// Each extra B strictly worsens both objectives.
inline ptl::EnvironmentSpec staircase() {
  return ptl::counting_env("staircase", 4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}});
}

// Integer totals in [0, levels) for every B count.
inline ptl::EnvironmentSpec random_counting(std::mt19937_64& gen, int horizon, int levels) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  std::vector<ptl::CostVector> totals(static_cast<std::size_t>(horizon) + 1);
  for (auto& t : totals) t = {static_cast<double>(d(gen)), static_cast<double>(d(gen))};
  return ptl::counting_env("random", horizon, totals);
}

}  // namespace fixture
