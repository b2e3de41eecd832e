#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "ptl/env.hpp"

namespace ptl {

/// True iff `a` is componentwise <= `b` and strictly < in at least one
/// component. Exact comparisons, no tolerance.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: cost vectors differ in length");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

/// True iff `a` is componentwise <= `b` (weak Pareto order).
inline bool weakly_below(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

struct FrontResult {
  std::vector<std::size_t> front_ids;                  // ascending
  std::map<std::size_t, std::size_t> dominated_by;     // excluded id -> lowest dominating id

  bool on_front(std::size_t id) const { return std::binary_search(front_ids.begin(), front_ids.end(), id); }
  bool operator==(const FrontResult&) const = default;
};

/// Non-dominated subset of `costs` (ids are positions). Items are visited in
/// lexicographic cost order; since a dominator always precedes what it
/// dominates in that order, and every dominated item is dominated by some
/// front member, each item only needs checking against the front so far.
/// Duplicated cost vectors do not dominate each other and share the front.
inline FrontResult pareto_front(std::span<const CostVector> costs) {
  if (costs.empty()) throw std::invalid_argument("pareto_front: empty input");
  const std::size_t n = costs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return costs[x] < costs[y]; });

  std::vector<std::size_t> front;
  std::vector<char> on_front(n, 0);
  for (std::size_t id : order) {
    const bool dominated = std::any_of(front.begin(), front.end(),
                                       [&](std::size_t f) { return dominates(costs[f], costs[id]); });
    if (!dominated) {
      front.push_back(id);
      on_front[id] = 1;
    }
  }

  FrontResult result;
  for (std::size_t id = 0; id < n; ++id) {
    if (on_front[id]) {
      result.front_ids.push_back(id);
      continue;
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (dominates(costs[w], costs[id])) {
        result.dominated_by.emplace(id, w);
        break;
      }
    }
  }
  return result;
}

}  // namespace ptl
