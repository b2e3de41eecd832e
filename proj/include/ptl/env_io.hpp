#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ptl/env.hpp"

namespace ptl {

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed,
                         std::initializer_list<std::string_view> required) {
  if (!obj.is_object()) throw spec_error(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw spec_error(where + "." + key + ": unknown key");
  }
  for (auto r : required)
    if (!obj.contains(std::string(r))) throw spec_error(where + "." + std::string(r) + ": missing");
}

inline double get_number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw spec_error(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline int get_int(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw spec_error(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::string get_string(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw spec_error(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline TransitionRule parse_transition(const json& j, const std::string& where) {
  require_keys(j, where, {"kind", "delta"}, {"kind"});
  const auto kind = get_string(j, "kind", where);
  if (kind == "jump_fixed") {
    if (!j.contains("delta")) throw spec_error(where + ".delta: missing");
    return JumpFixedClamped{get_int(j, "delta", where)};
  }
  if (j.contains("delta")) throw spec_error(where + ".delta: only valid for jump_fixed");
  if (kind == "stay") return Stay{};
  if (kind == "increment") return IncrementClamped{};
  if (kind == "jump_random_above") return JumpRandomAbove{};
  throw spec_error(where + ".kind: unknown transition kind '" + kind + "'");
}

inline CostRule parse_cost(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) throw spec_error(where + ".kind: missing");
  const auto kind = get_string(j, "kind", where);
  if (kind == "affine") {
    require_keys(j, where, {"kind", "a", "b"}, {"a", "b"});
    return AffineCost{get_number(j, "a", where), get_number(j, "b", where)};
  }
  if (kind == "reciprocal") {
    require_keys(j, where, {"kind", "a"}, {"a"});
    return ReciprocalCost{get_number(j, "a", where)};
  }
  if (kind == "table") {
    require_keys(j, where, {"kind", "values"}, {"values"});
    const auto& values = j.at("values");
    if (!values.is_array()) throw spec_error(where + ".values: expected an array");
    TableCost table;
    for (const auto& v : values) {
      if (!v.is_number()) throw spec_error(where + ".values: expected numbers");
      table.values.push_back(v.get<double>());
    }
    return table;
  }
  throw spec_error(where + ".kind: unknown cost kind '" + kind + "'");
}

inline json transition_to_json(const TransitionRule& rule) {
  if (std::holds_alternative<Stay>(rule)) return {{"kind", "stay"}};
  if (std::holds_alternative<IncrementClamped>(rule)) return {{"kind", "increment"}};
  if (const auto* jump = std::get_if<JumpFixedClamped>(&rule)) return {{"kind", "jump_fixed"}, {"delta", jump->delta}};
  return {{"kind", "jump_random_above"}};
}

inline json cost_to_json(const CostRule& rule) {
  if (const auto* affine = std::get_if<AffineCost>(&rule)) return {{"kind", "affine"}, {"a", affine->a}, {"b", affine->b}};
  if (const auto* recip = std::get_if<ReciprocalCost>(&rule)) return {{"kind", "reciprocal"}, {"a", recip->a}};
  return {{"kind", "table"}, {"values", std::get<TableCost>(rule).values}};
}

}  // namespace detail

/// Parses an environment JSON document (strict: unknown keys are errors) and
/// validates it.
inline EnvironmentSpec load_env(std::string_view document) {
  using detail::json;
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw spec_error(std::string("document: ") + e.what());
  }
  const std::string where = "env";
  detail::require_keys(root, where, {"name", "n_states", "horizon", "objectives", "restructure_prob", "actions"},
                       {"name", "n_states", "horizon", "objectives", "actions"});
  EnvironmentSpec spec;
  spec.name = detail::get_string(root, "name", where);
  spec.n_states = detail::get_int(root, "n_states", where);
  spec.horizon = detail::get_int(root, "horizon", where);
  if (root.contains("restructure_prob")) spec.restructure_prob = detail::get_number(root, "restructure_prob", where);

  const auto& objectives = root.at("objectives");
  if (!objectives.is_array()) throw spec_error("objectives: expected an array of strings");
  for (const auto& o : objectives) {
    if (!o.is_string()) throw spec_error("objectives: expected an array of strings");
    spec.objectives.push_back(o.get<std::string>());
  }

  const auto& actions = root.at("actions");
  if (!actions.is_array()) throw spec_error("actions: expected an array");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string aw = "actions[" + std::to_string(i) + "]";
    const auto& a = actions[i];
    detail::require_keys(a, aw, {"name", "transition", "costs"}, {"name", "transition", "costs"});
    ActionSpec action;
    action.name = detail::get_string(a, "name", aw);
    action.transition = detail::parse_transition(a.at("transition"), aw + ".transition");
    const auto& costs = a.at("costs");
    if (!costs.is_array()) throw spec_error(aw + ".costs: expected an array");
    for (std::size_t k = 0; k < costs.size(); ++k)
      action.costs.push_back(detail::parse_cost(costs[k], aw + ".costs[" + std::to_string(k) + "]"));
    spec.actions.push_back(std::move(action));
  }
  validate(spec);
  return spec;
}

inline EnvironmentSpec load_env_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw spec_error("cannot open environment file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_env(buf.str());
}

inline nlohmann::json env_to_json(const EnvironmentSpec& spec) {
  using detail::json;
  json actions = json::array();
  for (const auto& a : spec.actions) {
    json costs = json::array();
    for (const auto& c : a.costs) costs.push_back(detail::cost_to_json(c));
    actions.push_back({{"name", a.name}, {"transition", detail::transition_to_json(a.transition)}, {"costs", costs}});
  }
  return {{"name", spec.name},
          {"n_states", spec.n_states},
          {"horizon", spec.horizon},
          {"objectives", spec.objectives},
          {"restructure_prob", spec.restructure_prob},
          {"actions", actions}};
}

inline std::string serialize(const EnvironmentSpec& spec, int indent = 2) { return env_to_json(spec).dump(indent); }

/// "builtin:NAME" or a path to a JSON document.
inline EnvironmentSpec resolve_env(std::string_view ref) {
  constexpr std::string_view prefix = "builtin:";
  if (ref.substr(0, prefix.size()) == prefix) return builtin_env(ref.substr(prefix.size()));
  return load_env_file(std::string(ref));
}

}  // namespace ptl
