#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "ptl/error.hpp"
#include "ptl/rng.hpp"

namespace ptl {

using CostVector = std::vector<double>;

// ---------------------------------------------------------------------------
// Transition rules. N below is the top state, n_states - 1.
// ---------------------------------------------------------------------------

/// x -> x
struct Stay {
  bool operator==(const Stay&) const = default;
};

/// x -> min(x + 1, N)
struct IncrementClamped {
  bool operator==(const IncrementClamped&) const = default;
};

/// x -> min(x + delta, N), applied with the environment's restructure
/// probability p; with probability 1 - p the state is unchanged.
struct JumpFixedClamped {
  int delta = 1;
  bool operator==(const JumpFixedClamped&) const = default;
};

/// x -> uniform integer in [x + 1, N] when x < N, else x.
struct JumpRandomAbove {
  bool operator==(const JumpRandomAbove&) const = default;
};

using TransitionRule = std::variant<Stay, IncrementClamped, JumpFixedClamped, JumpRandomAbove>;

// ---------------------------------------------------------------------------
// Cost rules. Costs depend on the state only (no explicit time dependence).
// ---------------------------------------------------------------------------

/// a + b * x
struct AffineCost {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const AffineCost&) const = default;
};

/// a / (x + 1)
struct ReciprocalCost {
  double a = 0.0;
  bool operator==(const ReciprocalCost&) const = default;
};

/// values[x]; one entry per state.
struct TableCost {
  std::vector<double> values;
  bool operator==(const TableCost&) const = default;
};

using CostRule = std::variant<AffineCost, ReciprocalCost, TableCost>;

struct ActionSpec {
  std::string name;
  TransitionRule transition;
  std::vector<CostRule> costs;  // one per objective

  bool operator==(const ActionSpec&) const = default;
};

/// Finite-horizon decision process with states 0..n_states-1, initial state 0.
struct EnvironmentSpec {
  std::string name;
  int n_states = 2;
  int horizon = 1;
  std::vector<std::string> objectives;
  double restructure_prob = 1.0;
  std::vector<ActionSpec> actions;
  bool deterministic = true;

  std::size_t num_objectives() const { return objectives.size(); }
  std::size_t num_actions() const { return actions.size(); }
  int top_state() const { return n_states - 1; }

  /// Index of the action called `name`, or -1.
  int action_index(std::string_view action_name) const {
    for (std::size_t i = 0; i < actions.size(); ++i)
      if (actions[i].name == action_name) return static_cast<int>(i);
    return -1;
  }

  EnvironmentSpec with_horizon(int t) const {
    EnvironmentSpec copy = *this;
    copy.horizon = t;
    return copy;
  }

  bool operator==(const EnvironmentSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Rule evaluation
// ---------------------------------------------------------------------------

inline double evaluate_cost(const CostRule& rule, int state) {
  return std::visit(
      [state](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, AffineCost>) {
          return r.a + r.b * state;
        } else if constexpr (std::is_same_v<R, ReciprocalCost>) {
          return r.a / (state + 1);
        } else {
          return r.values.at(static_cast<std::size_t>(state));
        }
      },
      rule);
}

/// True if applying `rule` never consumes randomness under probability `p`.
inline bool is_deterministic(const TransitionRule& rule, double p) {
  if (std::holds_alternative<JumpRandomAbove>(rule)) return false;
  if (std::holds_alternative<JumpFixedClamped>(rule)) return p >= 1.0 || p <= 0.0;
  return true;
}

inline bool compute_deterministic(const EnvironmentSpec& spec) {
  return std::all_of(spec.actions.begin(), spec.actions.end(), [&](const ActionSpec& a) {
    return is_deterministic(a.transition, spec.restructure_prob);
  });
}

/// Checks every structural invariant and recomputes the deterministic flag.
/// Throws spec_error naming the offending field.
inline void validate(EnvironmentSpec& spec) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw spec_error(field + ": " + why);
  };
  if (spec.name.empty()) fail("name", "must be non-empty");
  if (spec.n_states < 2) fail("n_states", "must be >= 2");
  if (spec.horizon < 1) fail("horizon", "must be >= 1");
  if (spec.objectives.empty()) fail("objectives", "need at least one objective");
  if (!(spec.restructure_prob >= 0.0 && spec.restructure_prob <= 1.0))
    fail("restructure_prob", "must lie in [0, 1]");
  if (spec.actions.empty()) fail("actions", "need at least one action");

  const int top = spec.top_state();
  for (std::size_t i = 0; i < spec.actions.size(); ++i) {
    const auto& act = spec.actions[i];
    const std::string where = "actions[" + std::to_string(i) + "]";
    if (act.name.empty()) fail(where + ".name", "must be non-empty");
    for (std::size_t j = 0; j < i; ++j)
      if (spec.actions[j].name == act.name) fail(where + ".name", "duplicate action name '" + act.name + "'");
    if (const auto* jump = std::get_if<JumpFixedClamped>(&act.transition)) {
      if (jump->delta < 1 || jump->delta > top)
        fail(where + ".transition.delta", "must lie in [1, " + std::to_string(top) + "]");
    }
    if (act.costs.size() != spec.num_objectives())
      fail(where + ".costs", "expected " + std::to_string(spec.num_objectives()) + " cost rules, got " +
                                 std::to_string(act.costs.size()));
    for (std::size_t k = 0; k < act.costs.size(); ++k) {
      const std::string cw = where + ".costs[" + std::to_string(k) + "]";
      const auto& rule = act.costs[k];
      if (const auto* affine = std::get_if<AffineCost>(&rule)) {
        if (!std::isfinite(affine->a) || !std::isfinite(affine->b)) fail(cw, "non-finite coefficient");
        // Affine in x, so the extremes are at x = 0 and x = N.
        if (affine->a < 0.0 || affine->a + affine->b * top < 0.0)
          fail(cw, "affine cost is negative within the state range");
      } else if (const auto* recip = std::get_if<ReciprocalCost>(&rule)) {
        if (!std::isfinite(recip->a)) fail(cw + ".a", "non-finite coefficient");
      } else {
        const auto& values = std::get<TableCost>(rule).values;
        if (values.size() != static_cast<std::size_t>(spec.n_states))
          fail(cw + ".values", "table length " + std::to_string(values.size()) + " != n_states " +
                                   std::to_string(spec.n_states));
        for (double v : values)
          if (!std::isfinite(v)) fail(cw + ".values", "non-finite entry");
      }
    }
  }
  spec.deterministic = compute_deterministic(spec);
}

inline void check_indices(const EnvironmentSpec& spec, int state, int action) {
  if (state < 0 || state >= spec.n_states)
    throw std::out_of_range("state " + std::to_string(state) + " outside [0, " + std::to_string(spec.n_states) + ")");
  if (action < 0 || static_cast<std::size_t>(action) >= spec.num_actions())
    throw std::out_of_range("action " + std::to_string(action) + " outside [0, " +
                            std::to_string(spec.num_actions()) + ")");
}

/// Next state. `rng` is drawn from only by JumpRandomAbove, and by
/// JumpFixedClamped when the restructure probability lies strictly between
/// zero and one.
inline int transition(const EnvironmentSpec& spec, int state, int action, Stream& rng) {
  check_indices(spec, state, action);
  const int top = spec.top_state();
  const auto& rule = spec.actions[static_cast<std::size_t>(action)].transition;
  return std::visit(
      [&](const auto& r) -> int {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Stay>) {
          return state;
        } else if constexpr (std::is_same_v<R, IncrementClamped>) {
          return std::min(state + 1, top);
        } else if constexpr (std::is_same_v<R, JumpFixedClamped>) {
          if (spec.restructure_prob <= 0.0) return state;
          if (spec.restructure_prob < 1.0 && !(rng.uniform() < spec.restructure_prob)) return state;
          return std::min(state + r.delta, top);
        } else {
          if (state >= top) return state;
          return static_cast<int>(rng.between(state + 1, top));
        }
      },
      rule);
}

/// Deterministic transition; throws infeasible_error if the rule needs randomness.
inline int transition(const EnvironmentSpec& spec, int state, int action) {
  check_indices(spec, state, action);
  if (!is_deterministic(spec.actions[static_cast<std::size_t>(action)].transition, spec.restructure_prob))
    throw infeasible_error("action '" + spec.actions[static_cast<std::size_t>(action)].name +
                           "' has a stochastic transition");
  Stream unused(0);
  return transition(spec, state, action, unused);
}

/// Instantaneous cost vector of taking `action` in `state`.
inline CostVector step_cost(const EnvironmentSpec& spec, int state, int action) {
  check_indices(spec, state, action);
  const auto& rules = spec.actions[static_cast<std::size_t>(action)].costs;
  CostVector out;
  out.reserve(rules.size());
  for (const auto& rule : rules) out.push_back(evaluate_cost(rule, state));
  return out;
}

// ---------------------------------------------------------------------------
// Builtin environments
// ---------------------------------------------------------------------------

enum class BuiltinEnv { A3Deterministic, A4Stochastic, A4DeterministicJump, TwoBasinFixture };

namespace detail {

inline EnvironmentSpec three_action_model(std::string name, std::vector<std::string> action_names,
                                          CostRule first_action_cost, TransitionRule restructure) {
  EnvironmentSpec spec;
  spec.name = std::move(name);
  spec.n_states = 6;
  spec.horizon = 30;
  spec.objectives = {"immediate", "opportunity"};
  spec.restructure_prob = 1.0;
  // Explore/Advance: (0.8, 0.5 + 0.3 (5 - x)); Restructure: (2.0, 1.0 + 0.4 (5 - x)).
  spec.actions = {
      {action_names[0], Stay{}, {std::move(first_action_cost), ReciprocalCost{1.0}}},
      {action_names[1], IncrementClamped{}, {AffineCost{0.8, 0.0}, AffineCost{2.0, -0.3}}},
      {action_names[2], std::move(restructure), {AffineCost{2.0, 0.0}, AffineCost{3.0, -0.4}}},
  };
  return spec;
}

// Two actions over a state that encodes (step t, number of B actions b) as
// t + stride * b. Every step costs zero except the last, which charges the
// whole accumulated total for the final B count, so J depends on b only.
inline EnvironmentSpec counting_fixture(std::string name, int horizon, const std::vector<CostVector>& total_by_b) {
  const int stride = horizon;  // t < horizon keeps t + stride * b unique
  const int n_states = horizon + stride * horizon + 1;
  const std::size_t m = total_by_b.front().size();
  std::vector<std::vector<double>> a_tab(m, std::vector<double>(static_cast<std::size_t>(n_states), 0.0));
  auto b_tab = a_tab;
  const int last = horizon - 1;
  for (int b = 0; b <= last; ++b) {
    const auto s = static_cast<std::size_t>(last + stride * b);
    for (std::size_t k = 0; k < m; ++k) {
      a_tab[k][s] = total_by_b[static_cast<std::size_t>(b)][k];
      b_tab[k][s] = total_by_b[static_cast<std::size_t>(b) + 1][k];
    }
  }
  EnvironmentSpec spec;
  spec.name = std::move(name);
  spec.n_states = n_states;
  spec.horizon = horizon;
  for (std::size_t k = 0; k < m; ++k) spec.objectives.push_back("J" + std::to_string(k + 1));
  spec.restructure_prob = 1.0;
  ActionSpec a{"A", IncrementClamped{}, {}};
  ActionSpec bb{"B", JumpFixedClamped{stride + 1}, {}};
  for (std::size_t k = 0; k < m; ++k) {
    a.costs.emplace_back(TableCost{a_tab[k]});
    bb.costs.emplace_back(TableCost{b_tab[k]});
  }
  spec.actions = {std::move(a), std::move(bb)};
  return spec;
}

}  // namespace detail

/// Environment whose accumulated cost is `total_by_b[b]` for every length-
/// `horizon` action sequence over {A, B} containing b B's. Requires
/// total_by_b.size() == horizon + 1.
inline EnvironmentSpec counting_env(std::string name, int horizon, const std::vector<CostVector>& total_by_b) {
  if (horizon < 1 || total_by_b.size() != static_cast<std::size_t>(horizon) + 1)
    throw spec_error("counting_env: need horizon + 1 cost totals");
  auto spec = detail::counting_fixture(std::move(name), horizon, total_by_b);
  validate(spec);
  return spec;
}

inline EnvironmentSpec builtin_env(BuiltinEnv which) {
  EnvironmentSpec spec;
  switch (which) {
    case BuiltinEnv::A3Deterministic:
      spec = detail::three_action_model("a3", {"Refine", "Advance", "Restructure"}, AffineCost{0.1, 0.0},
                                        JumpFixedClamped{2});
      break;
    case BuiltinEnv::A4Stochastic:
      spec = detail::three_action_model("a4", {"Exploit", "Explore", "Restructure"}, AffineCost{0.1, 0.05},
                                        JumpRandomAbove{});
      break;
    case BuiltinEnv::A4DeterministicJump:
      spec = detail::three_action_model("a4-detjump", {"Exploit", "Explore", "Restructure"}, AffineCost{0.1, 0.05},
                                        JumpFixedClamped{2});
      break;
    case BuiltinEnv::TwoBasinFixture:
      // zero B's -> (2, 2), one -> (1.5, 3), two -> (3, 1.5), three -> (1, 1)
      spec = detail::counting_fixture("two-basin", 3, {{2.0, 2.0}, {1.5, 3.0}, {3.0, 1.5}, {1.0, 1.0}});
      break;
  }
  validate(spec);
  return spec;
}

inline const std::vector<std::string>& builtin_env_names() {
  static const std::vector<std::string> names = {"a3", "a4", "a4-detjump", "two-basin"};
  return names;
}

inline EnvironmentSpec builtin_env(std::string_view name) {
  if (name == "a3") return builtin_env(BuiltinEnv::A3Deterministic);
  if (name == "a4") return builtin_env(BuiltinEnv::A4Stochastic);
  if (name == "a4-detjump") return builtin_env(BuiltinEnv::A4DeterministicJump);
  if (name == "two-basin") return builtin_env(BuiltinEnv::TwoBasinFixture);
  throw spec_error("unknown builtin environment '" + std::string(name) + "'");
}

}  // namespace ptl
