#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ptl/sim.hpp"
#include "ptl/tedi.hpp"
#include "ptl/traps.hpp"

// CSV/JSON report writers. Every file has a header row and a frozen column
// order; doubles are written as the shortest decimal that round-trips.

namespace ptl::report {

inline std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) return "nan";
  return std::string(buf, res.ptr);
}

namespace detail {

inline void objective_columns(std::ostream& os, const std::string& prefix, std::size_t m, const std::string& suffix = "") {
  for (std::size_t k = 0; k < m; ++k) os << ',' << prefix << (k + 1) << suffix;
}

inline void values(std::ostream& os, std::span<const double> v) {
  for (double x : v) os << ',' << fmt(x);
}

}  // namespace detail

struct LabeledTrajectory {
  std::uint64_t run_id;
  const Trajectory* trajectory;
};

/// run_id,step,state,action_name,l1..lm,J1_cum..Jm_cum. One row per step
/// (state/action before the step, costs of the step, cumulative after it),
/// then a summary row with step -1, the final state and the final totals.
inline void write_trajectories_csv(std::ostream& os, const EnvironmentSpec& spec, std::span<const LabeledTrajectory> rows) {
  const auto m = spec.num_objectives();
  os << "run_id,step,state,action_name";
  detail::objective_columns(os, "l", m);
  detail::objective_columns(os, "J", m, "_cum");
  os << '\n';
  for (const auto& [run_id, traj] : rows) {
    std::vector<ptl::detail::ExactSum> sums(m);
    CostVector cum(m, 0.0);
    for (std::size_t t = 0; t < traj->actions.size(); ++t) {
      const auto c = step_cost(spec, traj->states[t], traj->actions[t]);
      for (std::size_t k = 0; k < m; ++k) {
        sums[k].add(c[k]);
        cum[k] = sums[k].value();
      }
      os << run_id << ',' << t << ',' << traj->states[t] << ','
         << spec.actions[static_cast<std::size_t>(traj->actions[t])].name;
      detail::values(os, c);
      detail::values(os, cum);
      os << '\n';
    }
    os << run_id << ",-1," << traj->final_state() << ',';
    for (std::size_t k = 0; k < m; ++k) os << ',';
    detail::values(os, cum);
    os << '\n';
  }
}

inline void write_batch_trajectories_csv(std::ostream& os, const EnvironmentSpec& spec, const BatchStats& batch) {
  std::vector<LabeledTrajectory> rows;
  for (const auto& r : batch.runs) rows.push_back({r.run_id, &r.trajectory});
  write_trajectories_csv(os, spec, rows);
}

inline void write_space_trajectories_csv(std::ostream& os, const TrajectorySpace& space) {
  std::vector<LabeledTrajectory> rows;
  for (std::size_t i = 0; i < space.size(); ++i) rows.push_back({i, &space.trajectories[i]});
  write_trajectories_csv(os, space.env, rows);
}

/// traj_id,J1..Jm,on_front,dominated_by,component_id
inline void write_front_csv(std::ostream& os, const TrajectorySpace& space, const FrontResult& front,
                            const std::vector<std::vector<std::size_t>>& components) {
  std::vector<long long> component(space.size(), -1);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (auto id : components[c]) component[id] = static_cast<long long>(c);
  os << "traj_id";
  detail::objective_columns(os, "J", space.env.num_objectives());
  os << ",on_front,dominated_by,component_id\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    os << i;
    detail::values(os, space.costs[i]);
    const bool on = front.on_front(i);
    os << ',' << (on ? 1 : 0) << ',';
    if (auto it = front.dominated_by.find(i); it != front.dominated_by.end()) os << it->second;
    os << ',';
    if (on && component[i] >= 0) os << component[i];
    os << '\n';
  }
}

/// Array of {trap_id, mode, member_ids, witness_ids, boundary_edges, label,
/// ceiling, confinement_threshold}; ceilings use `f`.
inline nlohmann::json traps_json(const TrajectorySpace& space, std::span<const Trap> traps, const Scalarization& f) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < traps.size(); ++i) {
    const auto& t = traps[i];
    auto edges = nlohmann::json::array();
    for (const auto& [in, o] : t.boundary_edges) edges.push_back({in, o});
    nlohmann::json threshold = nullptr;
    if (t.confinement_threshold) threshold = *t.confinement_threshold;
    out.push_back({{"trap_id", i},
                   {"mode", to_string(t.mode)},
                   {"member_ids", t.member_ids},
                   {"witness_ids", t.witnesses},
                   {"boundary_edges", edges},
                   {"label", to_string(t.label)},
                   {"ceiling", ceiling(space, t.member_ids, f)},
                   {"confinement_threshold", threshold}});
  }
  return out;
}

/// trap_id,D,S_structural,B,alpha,beta,gamma,tedi,category
inline void write_tedi_csv(std::ostream& os, std::span<const TediReport> reports) {
  os << "trap_id,D,S_structural,B,alpha,beta,gamma,tedi,category\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    os << i << ',' << fmt(r.escape_distance) << ',' << fmt(r.structural) << ',' << fmt(r.inertia) << ','
       << fmt(r.weights.alpha) << ',' << fmt(r.weights.beta) << ',' << fmt(r.weights.gamma) << ',' << fmt(r.value)
       << ',' << to_string(r.category) << '\n';
  }
}

// Batch tables. With more than one batch a leading `policy` column is added.

/// [policy,]final_state,count,frequency
inline void write_stats_csv(std::ostream& os, std::span<const BatchStats> batches) {
  const bool tagged = batches.size() > 1;
  os << (tagged ? "policy," : "") << "final_state,count,frequency\n";
  for (const auto& b : batches)
    for (std::size_t s = 0; s < b.final_state_histogram.size(); ++s) {
      if (tagged) os << b.policy.name() << ',';
      os << s << ',' << b.final_state_histogram[s] << ','
         << fmt(static_cast<double>(b.final_state_histogram[s]) / static_cast<double>(b.run_count())) << '\n';
    }
}

/// [policy,]action_name,count,frequency
inline void write_actions_csv(std::ostream& os, const EnvironmentSpec& spec, std::span<const BatchStats> batches) {
  const bool tagged = batches.size() > 1;
  os << (tagged ? "policy," : "") << "action_name,count,frequency\n";
  for (const auto& b : batches) {
    double total = 0.0;
    for (auto c : b.action_counts) total += static_cast<double>(c);
    for (std::size_t a = 0; a < b.action_counts.size(); ++a) {
      if (tagged) os << b.policy.name() << ',';
      os << spec.actions[a].name << ',' << b.action_counts[a] << ','
         << fmt(total > 0.0 ? static_cast<double>(b.action_counts[a]) / total : 0.0) << '\n';
    }
  }
}

/// [policy,]step,mean_state,mean_cum_J1
inline void write_curves_csv(std::ostream& os, std::span<const BatchStats> batches) {
  const bool tagged = batches.size() > 1;
  os << (tagged ? "policy," : "") << "step,mean_state,mean_cum_J1\n";
  for (const auto& b : batches)
    for (std::size_t t = 0; t < b.mean_state.size(); ++t) {
      if (tagged) os << b.policy.name() << ',';
      os << t << ',' << fmt(b.mean_state[t]) << ',' << fmt(b.mean_cum_j1[t]) << '\n';
    }
}

/// policy,run_id,J1..Jm,on_front (front over the pooled rollout costs)
inline void write_scatter_csv(std::ostream& os, const ComparisonReport& report) {
  const auto m = report.pooled.empty() ? 0 : report.pooled.front().cost.size();
  os << "policy,run_id";
  detail::objective_columns(os, "J", m);
  os << ",on_front\n";
  for (std::size_t i = 0; i < report.pooled.size(); ++i) {
    const auto& p = report.pooled[i];
    os << report.batches[p.policy_index].policy.name() << ',' << p.run_id;
    detail::values(os, p.cost);
    os << ',' << (report.pooled_front.on_front(i) ? 1 : 0) << '\n';
  }
}

/// policy,bin,lower,upper,count (histogram of the last objective)
inline void write_opportunity_csv(std::ostream& os, const ComparisonReport& report) {
  const auto& h = report.opportunity;
  os << "policy,bin,lower,upper,count\n";
  for (std::size_t p = 0; p < h.counts.size(); ++p)
    for (std::size_t b = 0; b < h.counts[p].size(); ++b)
      os << report.batches[p].policy.name() << ',' << b << ',' << fmt(h.edges[b]) << ',' << fmt(h.edges[b + 1]) << ','
         << h.counts[p][b] << '\n';
}

}  // namespace ptl::report
