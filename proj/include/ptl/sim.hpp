#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ptl/detail/parallel.hpp"
#include "ptl/dominance.hpp"
#include "ptl/policy.hpp"
#include "ptl/trajspace.hpp"

namespace ptl {

struct RunRecord {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  Trajectory trajectory;
  CostVector cost;
};

/// Aggregates of one policy's batch of rollouts, ordered by run id.
struct BatchStats {
  PolicySpec policy;
  std::vector<RunRecord> runs;
  std::vector<int> final_states;
  std::vector<std::size_t> final_state_histogram;  // one bin per state
  std::vector<std::size_t> action_counts;          // one entry per action
  std::vector<CostVector> costs;
  std::vector<double> mean_cum_j1;  // length horizon + 1, starts at 0
  std::vector<double> mean_state;   // length horizon + 1

  std::size_t run_count() const { return runs.size(); }
};

/// `runs` rollouts with seeds base_seed ^ run_index. Output is identical for
/// any thread count: runs fill their own slot and aggregation walks run order.
inline BatchStats run_batch(const EnvironmentSpec& spec, const PolicySpec& policy, std::size_t runs,
                            std::uint64_t base_seed, unsigned threads = 1) {
  if (runs == 0) throw std::invalid_argument("run_batch: need at least one run");
  validate_policy(policy, spec);

  BatchStats stats;
  stats.policy = policy;
  stats.runs.resize(runs);
  detail::parallel_for(runs, threads, [&](std::size_t i) {
    auto& r = stats.runs[i];
    r.run_id = i;
    r.seed = run_seed(base_seed, i);
    r.trajectory = rollout(spec, policy, r.seed);
    r.cost = accumulate(spec, r.trajectory);
  });

  const auto T = static_cast<std::size_t>(spec.horizon);
  stats.final_state_histogram.assign(static_cast<std::size_t>(spec.n_states), 0);
  stats.action_counts.assign(spec.num_actions(), 0);
  stats.mean_cum_j1.assign(T + 1, 0.0);
  stats.mean_state.assign(T + 1, 0.0);
  for (const auto& r : stats.runs) {
    const auto& traj = r.trajectory;
    stats.final_states.push_back(traj.final_state());
    ++stats.final_state_histogram[static_cast<std::size_t>(traj.final_state())];
    stats.costs.push_back(r.cost);
    detail::ExactSum cum;
    for (std::size_t t = 0; t <= T; ++t) {
      stats.mean_state[t] += traj.states[t];
      stats.mean_cum_j1[t] += cum.value();
      if (t < T) {
        ++stats.action_counts[static_cast<std::size_t>(traj.actions[t])];
        cum.add(step_cost(spec, traj.states[t], traj.actions[t])[0]);
      }
    }
  }
  const auto n = static_cast<double>(runs);
  for (auto& v : stats.mean_state) v /= n;
  for (auto& v : stats.mean_cum_j1) v /= n;
  return stats;
}

struct PooledPoint {
  std::size_t policy_index = 0;
  std::uint64_t run_id = 0;
  CostVector cost;
};

/// Histogram of the last objective (opportunity cost in the toy models),
/// with bins shared across policies.
struct CostHistogram {
  std::size_t objective = 0;
  std::vector<double> edges;                     // bins + 1 ascending edges
  std::vector<std::vector<std::size_t>> counts;  // [policy][bin]
};

struct ComparisonReport {
  std::vector<BatchStats> batches;
  std::vector<PooledPoint> pooled;  // every rollout cost, policy-major
  FrontResult pooled_front;         // over pooled costs, ids index `pooled`
  CostHistogram opportunity;
};

inline CostHistogram cost_histogram(const std::vector<BatchStats>& batches, std::size_t objective, std::size_t bins) {
  CostHistogram h;
  h.objective = objective;
  double lo = batches.front().costs.front()[objective], hi = lo;
  for (const auto& b : batches)
    for (const auto& c : b.costs) {
      lo = std::min(lo, c[objective]);
      hi = std::max(hi, c[objective]);
    }
  if (!(hi > lo)) bins = 1;  // every value identical: one degenerate bin [lo, lo]
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) h.edges.push_back(lo + width * static_cast<double>(i));
  h.edges.push_back(hi);
  for (const auto& b : batches) {
    std::vector<std::size_t> row(bins, 0);
    for (const auto& c : b.costs) {
      const auto bin = width > 0.0 ? static_cast<std::size_t>((c[objective] - lo) / width) : 0;
      ++row[std::min(bin, bins - 1)];
    }
    h.counts.push_back(std::move(row));
  }
  return h;
}

/// Runs every policy on the same seeds and pools the results.
inline ComparisonReport compare_policies(const EnvironmentSpec& spec, const std::vector<PolicySpec>& policies,
                                         std::size_t runs, std::uint64_t base_seed, unsigned threads = 1,
                                         std::size_t histogram_bins = 20) {
  if (policies.size() < 2) throw std::invalid_argument("compare_policies: need at least two policies");
  ComparisonReport report;
  for (const auto& p : policies) report.batches.push_back(run_batch(spec, p, runs, base_seed, threads));
  std::vector<CostVector> pooled_costs;
  for (std::size_t i = 0; i < report.batches.size(); ++i)
    for (const auto& r : report.batches[i].runs) {
      report.pooled.push_back({i, r.run_id, r.cost});
      pooled_costs.push_back(r.cost);
    }
  report.pooled_front = pareto_front(std::span<const CostVector>(pooled_costs));
  report.opportunity = cost_histogram(report.batches, spec.num_objectives() - 1, histogram_bins);
  return report;
}

}  // namespace ptl
