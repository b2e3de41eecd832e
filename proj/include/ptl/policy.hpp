#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ptl/env.hpp"
#include "ptl/rng.hpp"

namespace ptl {

enum class PolicyKind {
  PointwiseGreedy,     // argmin of the instantaneous cost sum
  TrajectoryDominant,  // tolerates temporary degradation to climb
  RandomUniform,
  FrontPlanner,        // executes an exhaustively planned trajectory-Pareto optimal sequence
};

/// Which action indices play the exploit / explore / restructure roles for
/// the trajectory-dominant rule.
struct ActionRoles {
  int exploit = 0;
  int explore = 1;
  int restructure = 2;
  bool operator==(const ActionRoles&) const = default;
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::PointwiseGreedy;
  double restructure_rate = 0.1;
  int explore_below = 3;
  // Pointwise scoring weights; empty means the plain unweighted sum.
  std::vector<double> pointwise_weights;
  ActionRoles roles;

  static PolicySpec pointwise() { return {}; }
  static PolicySpec trajectory(double restructure_rate = 0.1, int explore_below = 3) {
    PolicySpec p;
    p.kind = PolicyKind::TrajectoryDominant;
    p.restructure_rate = restructure_rate;
    p.explore_below = explore_below;
    return p;
  }
  static PolicySpec random() {
    PolicySpec p;
    p.kind = PolicyKind::RandomUniform;
    return p;
  }
  static PolicySpec front_planner() {
    PolicySpec p;
    p.kind = PolicyKind::FrontPlanner;
    return p;
  }

  /// True if rollouts do not depend on the seed (given deterministic dynamics).
  bool deterministic() const { return kind == PolicyKind::PointwiseGreedy || kind == PolicyKind::FrontPlanner; }

  std::string name() const {
    switch (kind) {
      case PolicyKind::PointwiseGreedy: return "pointwise";
      case PolicyKind::TrajectoryDominant: return "trajectory";
      case PolicyKind::RandomUniform: return "random";
      case PolicyKind::FrontPlanner: return "front";
    }
    return "unknown";
  }

  bool operator==(const PolicySpec&) const = default;
};

inline PolicySpec parse_policy(std::string_view name) {
  if (name == "pointwise") return PolicySpec::pointwise();
  if (name == "trajectory") return PolicySpec::trajectory();
  if (name == "random") return PolicySpec::random();
  if (name == "front") return PolicySpec::front_planner();
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected pointwise, trajectory, random or front)");
}

inline void validate_policy(const PolicySpec& policy, const EnvironmentSpec& spec) {
  const auto n_actions = static_cast<int>(spec.num_actions());
  switch (policy.kind) {
    case PolicyKind::TrajectoryDominant: {
      if (!(policy.restructure_rate >= 0.0 && policy.restructure_rate <= 1.0))
        throw spec_error("policy.restructure_rate: must lie in [0, 1]");
      if (policy.explore_below < 0 || policy.explore_below >= spec.n_states)
        throw spec_error("policy.explore_below: must lie in [0, n_states)");
      const auto& r = policy.roles;
      for (int idx : {r.exploit, r.explore, r.restructure})
        if (idx < 0 || idx >= n_actions)
          throw spec_error("policy.roles: trajectory-dominant policy needs exploit/explore/restructure actions, env '" +
                           spec.name + "' has " + std::to_string(n_actions));
      break;
    }
    case PolicyKind::PointwiseGreedy:
      if (!policy.pointwise_weights.empty() && policy.pointwise_weights.size() != spec.num_objectives())
        throw spec_error("policy.pointwise_weights: need one weight per objective");
      break;
    default:
      break;
  }
}

/// Action chosen at (`state`, step `t`). Policy draws come from `rng` before
/// any transition draw of the same step.
inline int select_action(const PolicySpec& policy, const EnvironmentSpec& spec, int state, int /*t*/, Stream& rng) {
  switch (policy.kind) {
    case PolicyKind::PointwiseGreedy: {
      int best = 0;
      double best_score = 0.0;
      for (std::size_t a = 0; a < spec.num_actions(); ++a) {
        const auto c = step_cost(spec, state, static_cast<int>(a));
        double score = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k)
          score += policy.pointwise_weights.empty() ? c[k] : policy.pointwise_weights[k] * c[k];
        if (a == 0 || score < best_score) {  // strict: ties keep the lowest index
          best = static_cast<int>(a);
          best_score = score;
        }
      }
      return best;
    }
    case PolicyKind::TrajectoryDominant:
      if (rng.uniform() < policy.restructure_rate) return policy.roles.restructure;
      if (state < policy.explore_below) return policy.roles.explore;
      return policy.roles.exploit;
    case PolicyKind::RandomUniform:
      return static_cast<int>(rng.below(spec.num_actions()));
    case PolicyKind::FrontPlanner:
      throw std::invalid_argument("select_action: the front planner chooses whole trajectories, use rollout()");
  }
  return 0;
}

}  // namespace ptl
