#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ptl/detail/parallel.hpp"
#include "ptl/front.hpp"
#include "ptl/geometry.hpp"
#include "ptl/tedi.hpp"
#include "ptl/trap.hpp"

namespace ptl {

/// Decision-cascade thresholds for classify_trap.
struct TaxonomyThresholds {
  double loop_inertia = 0.8;          // AttractorLoop: B at least this
  double loop_pair_share = 0.5;       // ... and one (state, action) pair takes this share of steps
  std::size_t corridor_max_edges = 2; // NarrowCorridor: at most this many near-minimal exits
  double corridor_band = 0.1;         // ... "near" = within this fraction of the minimal degradation
  std::size_t plateau_min_members = 8;
  double plateau_max_spread = 0.1;    // max pairwise normalized distance among members
};

/// No epsilon-neighbor of `id` dominates it.
inline bool is_locally_pareto_optimal(const TrajectorySpace& space, std::size_t id) {
  if (id >= space.size()) throw std::out_of_range("is_locally_pareto_optimal: invalid id " + std::to_string(id));
  for (auto n : space.neighbors(id))
    if (dominates(space.costs[n], space.costs[id])) return false;
  return true;
}

inline std::vector<std::size_t> locally_optimal_ids(const TrajectorySpace& space, unsigned threads = 1) {
  std::vector<char> flag(space.size(), 0);
  detail::parallel_for(space.size(), threads, [&](std::size_t i) { flag[i] = is_locally_pareto_optimal(space, i); });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flag.size(); ++i)
    if (flag[i]) out.push_back(i);
  return out;
}

/// Sorted (inside, outside) pairs of epsilon-adjacent items across the
/// membership boundary.
inline std::vector<Edge> boundary_edges(const TrajectorySpace& space, std::span<const std::size_t> members) {
  std::vector<char> inside(space.size(), 0);
  for (auto m : members) inside.at(m) = 1;
  std::vector<Edge> edges;
  for (auto m : members)
    for (auto n : space.neighbors(m))
      if (!inside[n]) edges.emplace_back(m, n);
  std::sort(edges.begin(), edges.end());
  return edges;
}

/// True iff no single-edit path from any member reaches a witness while
/// staying componentwise at or below the member's own cost, i.e. every
/// escape route has to pass through a temporarily worse trajectory.
inline bool has_degradation_certificate(const TrajectorySpace& space, std::span<const std::size_t> members,
                                        std::span<const std::size_t> witnesses) {
  std::vector<char> is_witness(space.size(), 0);
  for (auto w : witnesses) is_witness.at(w) = 1;
  std::vector<char> seen(space.size(), 0);
  for (auto start : members) {
    std::fill(seen.begin(), seen.end(), 0);
    const auto& ceiling = space.costs[start];
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : space.neighbors(u)) {
        if (seen[v] || !weakly_below(space.costs[v], ceiling)) continue;
        if (is_witness[v]) return false;
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return true;
}

inline TaxonomyLabel classify_trap(const TrajectorySpace& space, const Trap& trap,
                                   const std::optional<ActionStats>& stats = std::nullopt,
                                   const TaxonomyThresholds& th = {}) {
  const auto s = stats.value_or(ActionStats::of_members(space, trap.member_ids));

  // 1. low-entropy repetition of one (state, action) pair
  if (s.total_steps() > 0.0 && behavioral_inertia(s.action_counts) >= th.loop_inertia &&
      s.top_state_action_share() >= th.loop_pair_share)
    return TaxonomyLabel::AttractorLoop;

  const CostNormalizer norm(space.costs);

  // 2. few exits near the cheapest one
  if (!trap.boundary_edges.empty()) {
    std::vector<double> deg;
    deg.reserve(trap.boundary_edges.size());
    for (const auto& [in, out] : trap.boundary_edges)
      deg.push_back(degradation(norm(space.costs[in]), norm(space.costs[out])));
    const double lo = *std::min_element(deg.begin(), deg.end());
    const double band = lo + th.corridor_band * lo;
    const auto near = static_cast<std::size_t>(std::count_if(deg.begin(), deg.end(), [&](double d) { return d <= band; }));
    if (near <= th.corridor_max_edges) return TaxonomyLabel::NarrowCorridor;
  }

  // 3. many members packed into a small cost region
  if (trap.member_ids.size() >= th.plateau_min_members) {
    std::vector<CostVector> pts;
    for (auto m : trap.member_ids) pts.push_back(norm(space.costs[m]));
    double spread = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) spread = std::max(spread, euclidean(pts[i], pts[j]));
    if (spread <= th.plateau_max_spread) return TaxonomyLabel::OptimalityPlateau;
  }

  return TaxonomyLabel::LocalBasin;
}

/// Strict-mode traps of a complete space: components of the locally
/// Pareto-optimal set that some outside item dominates and that carry the
/// degradation certificate. Ordered by smallest member id.
inline std::vector<Trap> detect_traps_strict(const TrajectorySpace& space, const TaxonomyThresholds& th = {},
                                             unsigned threads = 1) {
  if (!space.complete) throw infeasible_error("detect_traps_strict: trajectory space is not a complete enumeration");
  const auto local = locally_optimal_ids(space, threads);
  std::vector<Trap> traps;
  for (auto& comp : connected_components(space, local)) {
    std::vector<char> inside(space.size(), 0);
    for (auto m : comp) inside[m] = 1;
    std::vector<std::size_t> witnesses;
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (inside[j]) continue;
      if (std::any_of(comp.begin(), comp.end(), [&](std::size_t m) { return dominates(space.costs[j], space.costs[m]); }))
        witnesses.push_back(j);
    }
    if (witnesses.empty() || !has_degradation_certificate(space, comp, witnesses)) continue;
    Trap trap;
    trap.boundary_edges = boundary_edges(space, comp);
    trap.member_ids = std::move(comp);
    trap.witnesses = std::move(witnesses);
    trap.mode = TrapMode::Strict;
    trap.label = classify_trap(space, trap, std::nullopt, th);
    traps.push_back(std::move(trap));
  }
  return traps;
}

/// Confinement-mode trap: the trajectories `policy` produces, located in
/// `reference` by action sequence. Deterministic policies use one rollout;
/// stochastic ones need `seeds`. The label uses the rollouts' own action
/// statistics.
inline Trap detect_trap_confinement(const EnvironmentSpec& spec, const PolicySpec& policy,
                                    const TrajectorySpace& reference, std::span<const std::uint64_t> seeds = {},
                                    const TaxonomyThresholds& th = {}) {
  if (reference.horizon != spec.horizon)
    throw std::invalid_argument("detect_trap_confinement: reference horizon " + std::to_string(reference.horizon) +
                                " differs from environment horizon " + std::to_string(spec.horizon));
  Trap trap;
  trap.mode = TrapMode::Confinement;
  std::optional<ActionStats> stats;

  if (policy.kind == PolicyKind::FrontPlanner) {
    trap.member_ids = pareto_front(reference).front_ids;
  } else {
    const std::uint64_t only_seed = 0;
    std::span<const std::uint64_t> used = seeds;
    if (policy.deterministic()) {
      used = std::span<const std::uint64_t>(&only_seed, 1);
    } else if (seeds.empty()) {
      throw std::invalid_argument("detect_trap_confinement: stochastic policy '" + policy.name() + "' needs seeds");
    }
    stats = ActionStats{std::vector<double>(spec.num_actions(), 0.0), {}};
    for (auto seed : used) {
      const auto traj = rollout(spec, policy, seed);
      const auto id = reference.find(traj.actions);
      if (!id || reference.trajectories[*id].states != traj.states)
        throw std::invalid_argument("detect_trap_confinement: rollout trajectory absent from reference space");
      trap.member_ids.push_back(*id);
      stats->add(traj);
    }
    std::sort(trap.member_ids.begin(), trap.member_ids.end());
    trap.member_ids.erase(std::unique(trap.member_ids.begin(), trap.member_ids.end()), trap.member_ids.end());
  }

  int k = 0;
  for (auto m : trap.member_ids)
    for (int x : reference.trajectories[m].states) k = std::max(k, x);
  trap.confinement_threshold = k;
  trap.boundary_edges = boundary_edges(reference, trap.member_ids);
  trap.label = classify_trap(reference, trap, stats, th);
  return trap;
}

/// Dynamic intelligence ceiling: max of f over the members' cost vectors.
inline double ceiling(const TrajectorySpace& space, std::span<const std::size_t> members, const Scalarization& f) {
  if (members.empty()) throw std::invalid_argument("ceiling: empty member set");
  double best = -std::numeric_limits<double>::infinity();
  for (auto m : members) best = std::max(best, f(space.costs.at(m)));
  return best;
}

inline double global_ceiling(const TrajectorySpace& space, const Scalarization& f) {
  if (space.empty()) throw std::invalid_argument("ceiling: empty space");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : space.costs) best = std::max(best, f(c));
  return best;
}

struct CeilingAnalysis {
  double global = 0.0;  // ceiling over the whole enumerated space
  double policy = 0.0;  // ceiling over the policy's confinement set
  double gap = 0.0;     // global - policy, >= 0
  Trap trap;
};

inline CeilingAnalysis analyze_ceiling(const EnvironmentSpec& spec, const PolicySpec& policy, const Scalarization& f,
                                       std::span<const std::uint64_t> seeds = {}, const EnumerationOptions& opts = {}) {
  EnumerationOptions o = opts;
  o.horizon = spec.horizon;
  const auto space = enumerate_trajectories(spec, o);
  CeilingAnalysis out;
  out.trap = detect_trap_confinement(spec, policy, space, seeds);
  out.global = global_ceiling(space, f);
  out.policy = ceiling(space, out.trap.member_ids, f);
  out.gap = out.global - out.policy;
  return out;
}

/// Ceiling of the full space minus the ceiling of the policy's reachable
/// set; positive values certify a dynamic intelligence ceiling.
inline double ceiling_gap(const EnvironmentSpec& spec, const PolicySpec& policy, const Scalarization& f,
                          std::span<const std::uint64_t> seeds = {}) {
  return analyze_ceiling(spec, policy, f, seeds).gap;
}

}  // namespace ptl
