#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptl/detail/fsum.hpp"
#include "ptl/detail/parallel.hpp"
#include "ptl/dominance.hpp"
#include "ptl/env.hpp"
#include "ptl/policy.hpp"
#include "ptl/rng.hpp"

namespace ptl {

/// Alternating state/action path: states.size() == actions.size() + 1.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;

  std::size_t horizon() const { return actions.size(); }
  int final_state() const { return states.back(); }
  bool operator==(const Trajectory&) const = default;
};

/// Trajectory obtained by applying `actions` from `start` under deterministic dynamics.
inline Trajectory replay(const EnvironmentSpec& spec, std::vector<int> actions, int start = 0) {
  Trajectory traj;
  traj.states.reserve(actions.size() + 1);
  traj.states.push_back(start);
  for (int a : actions) traj.states.push_back(transition(spec, traj.states.back(), a));
  traj.actions = std::move(actions);
  return traj;
}

/// Per-objective sum of step costs along `traj`, correctly rounded, so the
/// result does not depend on summation order.
inline CostVector accumulate(const EnvironmentSpec& spec, const Trajectory& traj) {
  if (traj.states.size() != traj.actions.size() + 1)
    throw std::invalid_argument("accumulate: expected " + std::to_string(traj.actions.size() + 1) + " states, got " +
                                std::to_string(traj.states.size()));
  std::vector<detail::ExactSum> sums(spec.num_objectives());
  for (std::size_t t = 0; t < traj.actions.size(); ++t) {
    const int x = traj.states[t];
    const int a = traj.actions[t];
    if (spec.deterministic && transition(spec, x, a) != traj.states[t + 1])
      throw std::invalid_argument("accumulate: step " + std::to_string(t) + " is not replay-consistent");
    const auto c = step_cost(spec, x, a);
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k].add(c[k]);
  }
  CostVector total;
  total.reserve(sums.size());
  for (const auto& s : sums) total.push_back(s.value());
  return total;
}

/// Number of positions where the action sequences differ.
inline std::size_t hamming(const Trajectory& a, const Trajectory& b) {
  if (a.actions.size() != b.actions.size()) throw std::invalid_argument("hamming: horizons differ");
  std::size_t d = 0;
  for (std::size_t t = 0; t < a.actions.size(); ++t) d += a.actions[t] != b.actions[t];
  return d;
}

/// Finite set of trajectories with their accumulated costs. Two items are
/// adjacent iff their action sequences differ in at most `epsilon` positions.
struct TrajectorySpace {
  EnvironmentSpec env;
  int horizon = 0;
  std::vector<Trajectory> trajectories;
  std::vector<CostVector> costs;
  int epsilon = 1;
  // True when `trajectories` holds every |A|^horizon action sequence in
  // lexicographic order, so the id of a sequence is its base-|A| value.
  bool complete = false;

  std::size_t size() const { return trajectories.size(); }
  bool empty() const { return trajectories.empty(); }

  /// Id of the item with this action sequence.
  std::optional<std::size_t> find(const std::vector<int>& actions) const {
    if (static_cast<int>(actions.size()) != horizon) return std::nullopt;
    if (complete) {
      std::size_t id = 0;
      const auto base = env.num_actions();
      for (int a : actions) {
        if (a < 0 || static_cast<std::size_t>(a) >= base) return std::nullopt;
        id = id * base + static_cast<std::size_t>(a);
      }
      return id;
    }
    for (std::size_t i = 0; i < trajectories.size(); ++i)
      if (trajectories[i].actions == actions) return i;
    return std::nullopt;
  }

  /// Ascending ids of all other items within Hamming distance epsilon of `id`.
  std::vector<std::size_t> neighbors(std::size_t id) const {
    if (id >= size()) throw std::out_of_range("neighbors: invalid id " + std::to_string(id));
    std::vector<std::size_t> out;
    if (epsilon <= 0) return out;
    if (!complete) {
      for (std::size_t j = 0; j < size(); ++j)
        if (j != id && hamming(trajectories[id], trajectories[j]) <= static_cast<std::size_t>(epsilon))
          out.push_back(j);
      return out;
    }
    // Enumerate edits directly: choose up to epsilon positions and a
    // different action at each.
    const auto base = env.num_actions();
    const auto T = static_cast<std::size_t>(horizon);
    std::vector<std::size_t> weight(T, 1);
    for (std::size_t t = T; t-- > 1;) weight[t - 1] = weight[t] * base;
    const auto& seq = trajectories[id].actions;
    auto recurse = [&](auto&& self, std::size_t from, int edits_left, std::size_t current) -> void {
      for (std::size_t t = from; t < T; ++t) {
        const auto orig = static_cast<std::size_t>(seq[t]);
        for (std::size_t a = 0; a < base; ++a) {
          if (a == orig) continue;
          const std::size_t next = current - orig * weight[t] + a * weight[t];
          out.push_back(next);
          if (edits_left > 1) self(self, t + 1, edits_left - 1, next);
        }
      }
    };
    recurse(recurse, 0, epsilon, id);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Space over explicitly given trajectories (ids follow input order).
inline TrajectorySpace make_space(const EnvironmentSpec& spec, std::vector<Trajectory> trajectories, int epsilon = 1) {
  if (epsilon < 0) throw std::invalid_argument("make_space: epsilon must be non-negative");
  TrajectorySpace space;
  space.env = spec;
  space.horizon = trajectories.empty() ? spec.horizon : static_cast<int>(trajectories.front().horizon());
  space.epsilon = epsilon;
  for (auto& t : trajectories) {
    if (static_cast<int>(t.horizon()) != space.horizon)
      throw std::invalid_argument("make_space: trajectories have different horizons");
    space.costs.push_back(accumulate(spec, t));
    space.trajectories.push_back(std::move(t));
  }
  return space;
}

inline constexpr std::size_t default_enumeration_cap = 10'000'000;

struct EnumerationOptions {
  std::optional<int> horizon;  // overrides spec.horizon
  int epsilon = 1;
  std::size_t cap = default_enumeration_cap;
  unsigned threads = 1;
};

/// All |A|^T action sequences of a deterministic environment, in
/// lexicographic order, with replayed states and accumulated costs.
inline TrajectorySpace enumerate_trajectories(const EnvironmentSpec& spec, const EnumerationOptions& opts = {}) {
  if (!spec.deterministic)
    throw infeasible_error("enumerate_trajectories: environment '" + spec.name + "' is stochastic");
  if (opts.epsilon < 0) throw std::invalid_argument("enumerate_trajectories: epsilon must be non-negative");
  const int T = opts.horizon.value_or(spec.horizon);
  if (T < 0) throw std::invalid_argument("enumerate_trajectories: negative horizon");
  const auto base = spec.num_actions();
  std::size_t count = 1;
  for (int t = 0; t < T; ++t) {
    if (count > opts.cap / base)
      throw infeasible_error("enumerate_trajectories: " + std::to_string(base) + "^" + std::to_string(T) +
                             " trajectories exceed the cap of " + std::to_string(opts.cap));
    count *= base;
  }
  if (count > opts.cap)
    throw infeasible_error("enumerate_trajectories: trajectory count exceeds the cap of " + std::to_string(opts.cap));

  TrajectorySpace space;
  space.env = spec;
  space.horizon = T;
  space.epsilon = opts.epsilon;
  space.complete = true;
  space.trajectories.resize(count);
  space.costs.resize(count);
  detail::parallel_for(count, opts.threads, [&](std::size_t id) {
    std::vector<int> actions(static_cast<std::size_t>(T));
    std::size_t rest = id;
    for (std::size_t t = actions.size(); t-- > 0;) {
      actions[t] = static_cast<int>(rest % base);
      rest /= base;
    }
    space.trajectories[id] = replay(spec, std::move(actions));
    space.costs[id] = accumulate(spec, space.trajectories[id]);
  });
  return space;
}

/// Simulates `spec.horizon` steps from state 0. Fully determined by
/// (spec, policy, seed). The front planner executes its lowest-id
/// trajectory-Pareto optimal action sequence.
inline Trajectory rollout(const EnvironmentSpec& spec, const PolicySpec& policy, std::uint64_t seed) {
  validate_policy(policy, spec);
  if (policy.kind == PolicyKind::FrontPlanner) {
    const auto space = enumerate_trajectories(spec);
    const auto front = pareto_front(space.costs);
    return space.trajectories[front.front_ids.front()];
  }
  Stream rng(seed);
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(spec.horizon) + 1);
  traj.actions.reserve(static_cast<std::size_t>(spec.horizon));
  traj.states.push_back(0);
  for (int t = 0; t < spec.horizon; ++t) {
    const int x = traj.states.back();
    const int a = select_action(policy, spec, x, t, rng);
    traj.actions.push_back(a);
    traj.states.push_back(transition(spec, x, a, rng));
  }
  return traj;
}

}  // namespace ptl
