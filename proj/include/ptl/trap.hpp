#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptl/trajspace.hpp"

namespace ptl {

enum class TrapMode { Strict, Confinement };

enum class TaxonomyLabel { LocalBasin, NarrowCorridor, OptimalityPlateau, AttractorLoop };

inline std::string to_string(TrapMode mode) { return mode == TrapMode::Strict ? "strict" : "confinement"; }

inline std::string to_string(TaxonomyLabel label) {
  switch (label) {
    case TaxonomyLabel::LocalBasin: return "LocalBasin";
    case TaxonomyLabel::NarrowCorridor: return "NarrowCorridor";
    case TaxonomyLabel::OptimalityPlateau: return "OptimalityPlateau";
    case TaxonomyLabel::AttractorLoop: return "AttractorLoop";
  }
  return "LocalBasin";
}

using Edge = std::pair<std::size_t, std::size_t>;  // (inside id, outside id)

/// A set of trajectories within one TrajectorySpace.
///
/// Strict traps are connected, locally non-dominated sets that some outside
/// trajectory dominates, reachable only through temporary degradation.
/// Confinement traps are the trajectory set a policy can actually produce;
/// they carry no witnesses and record the highest state they visit.
struct Trap {
  std::vector<std::size_t> member_ids;  // ascending
  std::vector<std::size_t> witnesses;   // ascending; empty in confinement mode
  std::vector<Edge> boundary_edges;     // sorted
  TrapMode mode = TrapMode::Strict;
  TaxonomyLabel label = TaxonomyLabel::LocalBasin;
  std::optional<int> confinement_threshold;
};

/// f(v) = -sum_i w_i v_i with non-negative weights summing to one; lower
/// accumulated cost means a higher score.
struct Scalarization {
  std::vector<double> weights;

  static Scalarization uniform(std::size_t m) { return {std::vector<double>(m, 1.0 / static_cast<double>(m))}; }

  static Scalarization from_weights(std::vector<double> w) {
    if (w.empty()) throw std::invalid_argument("scalarization: no weights");
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("scalarization: weights must be non-negative");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("scalarization: weights must sum to 1");
    return {std::move(w)};
  }

  double operator()(std::span<const double> v) const {
    if (v.size() != weights.size()) throw std::invalid_argument("scalarization: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += weights[i] * v[i];
    return -s;
  }
};

/// Action occurrence counts, plus joint (state, action) counts when known.
struct ActionStats {
  std::vector<double> action_counts;
  std::map<std::pair<int, int>, double> state_action_counts;

  double total_steps() const {
    double s = 0.0;
    for (double c : action_counts) s += c;
    return s;
  }

  /// Largest share of steps taken by a single (state, action) pair.
  double top_state_action_share() const {
    const double total = total_steps();
    if (total <= 0.0) return 0.0;
    double best = 0.0;
    for (const auto& [key, c] : state_action_counts) best = std::max(best, c);
    return best / total;
  }

  void add(const Trajectory& traj) {
    for (std::size_t t = 0; t < traj.actions.size(); ++t) {
      action_counts.at(static_cast<std::size_t>(traj.actions[t])) += 1.0;
      state_action_counts[{traj.states[t], traj.actions[t]}] += 1.0;
    }
  }

  static ActionStats of(std::size_t n_actions, std::span<const Trajectory> trajectories) {
    ActionStats stats{std::vector<double>(n_actions, 0.0), {}};
    for (const auto& t : trajectories) stats.add(t);
    return stats;
  }

  /// Steps of the trap's member trajectories, each member counted once.
  static ActionStats of_members(const TrajectorySpace& space, std::span<const std::size_t> ids) {
    ActionStats stats{std::vector<double>(space.env.num_actions(), 0.0), {}};
    for (auto id : ids) stats.add(space.trajectories.at(id));
    return stats;
  }
};

}  // namespace ptl
