#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "ptl/dominance.hpp"
#include "ptl/trajspace.hpp"

namespace ptl {

inline FrontResult pareto_front(const TrajectorySpace& space) {
  if (space.empty()) throw std::invalid_argument("pareto_front: empty trajectory space");
  return pareto_front(std::span<const CostVector>(space.costs));
}

/// Connected components of `ids` under the space's epsilon-adjacency, where
/// paths may only pass through members of `ids`. Components are sorted
/// internally and ordered by their smallest id.
inline std::vector<std::vector<std::size_t>> connected_components(const TrajectorySpace& space,
                                                                  const std::vector<std::size_t>& ids) {
  std::vector<char> member(space.size(), 0), seen(space.size(), 0);
  for (auto id : ids) member.at(id) = 1;
  std::vector<std::size_t> sorted_ids(ids);
  std::sort(sorted_ids.begin(), sorted_ids.end());

  std::vector<std::vector<std::size_t>> components;
  for (auto start : sorted_ids) {
    if (seen[start]) continue;
    std::vector<std::size_t> comp;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (auto v : space.neighbors(u)) {
        if (member[v] && !seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

/// Partition of the front into components of the adjacency graph restricted
/// to front members.
inline std::vector<std::vector<std::size_t>> front_components(const TrajectorySpace& space, const FrontResult& front) {
  return connected_components(space, front.front_ids);
}

struct PlannedFront {
  TrajectorySpace space;
  FrontResult front;
};

/// Idealized trajectory-dominant planner: every trajectory-Pareto optimal
/// action sequence of a deterministic, enumerable environment.
inline PlannedFront plan_front(const EnvironmentSpec& spec, const EnumerationOptions& opts = {}) {
  PlannedFront out{enumerate_trajectories(spec, opts), {}};
  out.front = pareto_front(out.space);
  return out;
}

}  // namespace ptl
