#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptl/dominance.hpp"
#include "ptl/geometry.hpp"
#include "ptl/trap.hpp"

namespace ptl {

/// Mixing weights of the three escape-difficulty components; sum to one.
struct TediWeights {
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  double gamma = 1.0 / 3.0;

  static TediWeights uniform() { return {}; }

  /// With `normalize`, divides by the sum; otherwise the sum must already be
  /// one within 1e-12.
  static TediWeights make(double alpha, double beta, double gamma, bool normalize = true) {
    for (double w : {alpha, beta, gamma})
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("TEDI weights must be non-negative and finite");
    const double sum = alpha + beta + gamma;
    if (!(sum > 0.0)) throw std::invalid_argument("TEDI weights must not all be zero");
    if (normalize) return {alpha / sum, beta / sum, gamma / sum};
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("TEDI weights must sum to 1");
    return {alpha, beta, gamma};
  }

  bool operator==(const TediWeights&) const = default;
};

enum class EscapeCategory { Trivial, Moderate, Hard, PracticallyInescapable };

inline std::string to_string(EscapeCategory c) {
  switch (c) {
    case EscapeCategory::Trivial: return "Trivial";
    case EscapeCategory::Moderate: return "Moderate";
    case EscapeCategory::Hard: return "Hard";
    case EscapeCategory::PracticallyInescapable: return "PracticallyInescapable";
  }
  return "Trivial";
}

/// Quartile bands; a value exactly on a boundary falls in the harder band.
inline EscapeCategory categorize(double value) {
  if (value < 0.25) return EscapeCategory::Trivial;
  if (value < 0.5) return EscapeCategory::Moderate;
  if (value < 0.75) return EscapeCategory::Hard;
  return EscapeCategory::PracticallyInescapable;
}

struct TediReport {
  double escape_distance = 0.0;  // D
  double structural = 0.0;       // S (structural constraint, not the trap set)
  double inertia = 0.0;          // B
  TediWeights weights;
  double value = 0.0;
  EscapeCategory category = EscapeCategory::Trivial;
  std::vector<std::string> warnings;
};

namespace detail {

inline CostNormalizer normalizer_with_warnings(const TrajectorySpace& space, std::vector<std::string>* warnings) {
  CostNormalizer norm(space.costs);
  if (warnings)
    for (auto k : norm.dropped())
      warnings->push_back("objective " + std::to_string(k + 1) + " has zero range and was dropped from the metric");
  return norm;
}

}  // namespace detail

/// Escape distance D in [0, 1]: closest normalized-cost distance from a trap
/// member to a trajectory that beats the trap, over the diameter of the whole
/// normalized cloud. Strict traps measure to their witnesses; confinement
/// traps to outside items whose score exceeds the trap's ceiling under `f`
/// (D = 0 if there are none).
inline double escape_distance(const TrajectorySpace& space, const Trap& trap, const Scalarization& f,
                              std::vector<std::string>* warnings = nullptr) {
  if (trap.member_ids.empty()) throw std::invalid_argument("escape_distance: empty trap");
  const auto norm = detail::normalizer_with_warnings(space, warnings);
  std::vector<CostVector> cloud;
  cloud.reserve(space.size());
  for (const auto& c : space.costs) cloud.push_back(norm(c));

  double best = std::numeric_limits<double>::infinity();
  if (trap.mode == TrapMode::Strict) {
    if (trap.witnesses.empty()) throw std::invalid_argument("escape_distance: strict trap without witnesses");
    for (auto m : trap.member_ids)
      for (auto w : trap.witnesses) best = std::min(best, euclidean(cloud[m], cloud.at(w)));
  } else {
    double ceiling = -std::numeric_limits<double>::infinity();
    for (auto m : trap.member_ids) ceiling = std::max(ceiling, f(space.costs[m]));
    std::vector<char> inside(space.size(), 0);
    for (auto m : trap.member_ids) inside[m] = 1;
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (inside[j] || !(f(space.costs[j]) > ceiling)) continue;
      for (auto m : trap.member_ids) best = std::min(best, euclidean(cloud[m], cloud[j]));
    }
    if (!std::isfinite(best)) return 0.0;
  }
  const double diam = diameter(std::move(cloud));
  if (diam <= 0.0 || best <= 0.0) return 0.0;
  return std::min(1.0, best / diam);
}

/// Structural constraint S in [0, 1]: mean over boundary edges of the
/// normalized worst-coordinate degradation (capped at 1). A trap without
/// boundary edges is sealed, S = 1.
inline double structural_constraint(const TrajectorySpace& space, const Trap& trap,
                                    std::vector<std::string>* warnings = nullptr) {
  if (trap.boundary_edges.empty()) return 1.0;
  const auto norm = detail::normalizer_with_warnings(space, warnings);
  double sum = 0.0;
  for (const auto& [in, out] : trap.boundary_edges)
    sum += std::min(1.0, degradation(norm(space.costs.at(in)), norm(space.costs.at(out))));
  return sum / static_cast<double>(trap.boundary_edges.size());
}

/// Behavioral inertia B = 1 - H(p) / log|A| over the empirical action
/// distribution; 1 for a single action.
inline double behavioral_inertia(std::span<const double> frequencies) {
  if (frequencies.empty()) throw std::invalid_argument("behavioral_inertia: no actions");
  double total = 0.0;
  for (double f : frequencies) {
    if (!(f >= 0.0)) throw std::invalid_argument("behavioral_inertia: negative frequency");
    total += f;
  }
  if (!(total > 0.0)) throw std::invalid_argument("behavioral_inertia: all frequencies are zero");
  if (frequencies.size() == 1) return 1.0;
  double entropy = 0.0;
  for (double f : frequencies) {
    if (f <= 0.0) continue;
    const double p = f / total;
    entropy -= p * std::log(p);
  }
  return std::clamp(1.0 - entropy / std::log(static_cast<double>(frequencies.size())), 0.0, 1.0);
}

/// TEDI = alpha D + beta S + gamma B.
inline TediReport tedi(double d, double s, double b, const TediWeights& w = {}) {
  for (double c : {d, s, b})
    if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("tedi: components must lie in [0, 1]");
  TediReport r;
  r.escape_distance = d;
  r.structural = s;
  r.inertia = b;
  r.weights = w;
  // Weights sum to one only up to rounding.
  r.value = std::clamp(w.alpha * d + w.beta * s + w.gamma * b, 0.0, 1.0);
  r.category = categorize(r.value);
  return r;
}

/// Full report for `trap`. Without explicit stats, B uses the action
/// occurrences across the trap's member trajectories.
inline TediReport tedi_for_trap(const TrajectorySpace& space, const Trap& trap,
                                const std::optional<ActionStats>& stats = std::nullopt, const TediWeights& w = {},
                                std::optional<Scalarization> f = std::nullopt) {
  const auto scal = f.value_or(Scalarization::uniform(space.env.num_objectives()));
  std::vector<std::string> warnings;
  const double d = escape_distance(space, trap, scal, &warnings);
  const double s = structural_constraint(space, trap);
  const auto counts = stats ? stats->action_counts : ActionStats::of_members(space, trap.member_ids).action_counts;
  auto report = tedi(d, s, behavioral_inertia(counts), w);
  report.warnings = std::move(warnings);
  return report;
}

}  // namespace ptl
