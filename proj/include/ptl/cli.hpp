#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptl/env_io.hpp"
#include "ptl/front.hpp"
#include "ptl/report.hpp"
#include "ptl/sim.hpp"
#include "ptl/svg.hpp"
#include "ptl/tedi.hpp"
#include "ptl/traps.hpp"

namespace ptl::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalidSpec = 2, kInfeasible = 3 };

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string env_ref = "builtin:a4";
  std::string policy = "pointwise";
  std::string policies = "pointwise,trajectory,random";
  std::size_t runs = 100;
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
  int epsilon = 1;
  std::string weights;         // TEDI alpha,beta,gamma
  std::string scalar_weights;  // scalarization w1..wm
  std::string components;      // tedi D,S,B
  std::string out = ".";
  bool svg = false;
  bool json = false;
  bool force = false;
  unsigned threads = 1;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw usage_error(flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

inline std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("PTL_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw usage_error(std::string("PTL_SEED: '") + env + "' is not an unsigned integer");
    }
  }
  return 0;
}

inline TediWeights resolve_tedi_weights(const RunConfig& cfg) {
  if (cfg.weights.empty()) return TediWeights::uniform();
  const auto w = parse_list(cfg.weights, "--weights");
  if (w.size() != 3) throw usage_error("--weights: expected alpha,beta,gamma");
  try {
    return TediWeights::make(w[0], w[1], w[2]);
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("--weights: ") + e.what());
  }
}

inline Scalarization resolve_scalarization(const RunConfig& cfg, const EnvironmentSpec& spec) {
  if (cfg.scalar_weights.empty()) return Scalarization::uniform(spec.num_objectives());
  auto w = parse_list(cfg.scalar_weights, "--scalar-weights");
  if (w.size() != spec.num_objectives())
    throw usage_error("--scalar-weights: expected " + std::to_string(spec.num_objectives()) + " weights");
  try {
    return Scalarization::from_weights(std::move(w));
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("--scalar-weights: ") + e.what());
  }
}

inline PolicySpec resolve_policy(const std::string& name) {
  try {
    return parse_policy(name);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
}

inline EnvironmentSpec resolve_spec(const RunConfig& cfg) {
  auto spec = resolve_env(cfg.env_ref);
  if (cfg.horizon) {
    if (*cfg.horizon < 1) throw usage_error("--horizon: must be >= 1");
    spec.horizon = *cfg.horizon;
  }
  return spec;
}

/// Output directory with an overwrite guard checked before anything is written.
class OutputDir {
 public:
  OutputDir(const std::string& path, bool force, const std::vector<std::string>& files) : root_(path) {
    if (!force)
      for (const auto& f : files)
        if (std::filesystem::exists(root_ / f))
          throw usage_error("refusing to overwrite " + (root_ / f).string() + " (use --force)");
    std::filesystem::create_directories(root_);
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(root_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (root_ / name).string());
    out << content;
  }

  template <class Fn>
  void write_with(const std::string& name, Fn&& fn) const {
    std::ostringstream os;
    fn(os);
    write(name, os.str());
  }

 private:
  std::filesystem::path root_;
};

inline std::vector<std::uint64_t> seed_set(std::uint64_t base, std::size_t runs) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < runs; ++i) seeds.push_back(run_seed(base, i));
  return seeds;
}

inline nlohmann::json batch_summary(const BatchStats& b) {
  CostVector mean(b.costs.front().size(), 0.0);
  for (const auto& c : b.costs)
    for (std::size_t k = 0; k < c.size(); ++k) mean[k] += c[k];
  for (auto& v : mean) v /= static_cast<double>(b.run_count());
  return {{"policy", b.policy.name()},
          {"runs", b.run_count()},
          {"final_state_histogram", b.final_state_histogram},
          {"action_counts", b.action_counts},
          {"mean_cost", mean}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_env(const RunConfig& cfg, const std::string& action, std::ostream& out) {
  if (action == "list") {
    for (const auto& n : builtin_env_names()) out << "builtin:" << n << '\n';
    return kOk;
  }
  if (action == "show") {
    out << serialize(resolve_env(cfg.env_ref)) << '\n';
    return kOk;
  }
  throw usage_error("env: expected 'list' or 'show'");
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.runs == 0) throw usage_error("--runs: must be >= 1");
  const auto policy = detail::resolve_policy(cfg.policy);
  const auto spec = detail::resolve_spec(cfg);
  const auto seed = detail::resolve_seed(cfg);
  std::vector<std::string> files = {"trajectories.csv", "stats.csv", "actions.csv", "curves.csv"};
  if (cfg.json) files.push_back("summary.json");
  const detail::OutputDir dir(cfg.out, cfg.force, files);

  std::vector<BatchStats> batches{run_batch(spec, policy, cfg.runs, seed, cfg.threads)};
  dir.write_with("trajectories.csv", [&](auto& os) { report::write_batch_trajectories_csv(os, spec, batches[0]); });
  dir.write_with("stats.csv", [&](auto& os) { report::write_stats_csv(os, batches); });
  dir.write_with("actions.csv", [&](auto& os) { report::write_actions_csv(os, spec, batches); });
  dir.write_with("curves.csv", [&](auto& os) { report::write_curves_csv(os, batches); });
  if (cfg.json) dir.write("summary.json", detail::batch_summary(batches[0]).dump(2) + "\n");
  out << "simulated " << cfg.runs << " runs of '" << policy.name() << "' on " << spec.name << " (seed " << seed
      << ")\n";
  return kOk;
}

inline int cmd_enumerate(const RunConfig& cfg, std::ostream& out) {
  const auto spec = detail::resolve_spec(cfg);
  const detail::OutputDir dir(cfg.out, cfg.force, {"trajectories.csv"});
  const auto space = enumerate_trajectories(spec, {.horizon = std::nullopt, .epsilon = cfg.epsilon, .threads = cfg.threads});
  dir.write_with("trajectories.csv", [&](auto& os) { report::write_space_trajectories_csv(os, space); });
  out << "enumerated " << space.size() << " trajectories of " << spec.name << " (T=" << space.horizon << ")\n";
  return kOk;
}

inline int cmd_front(const RunConfig& cfg, std::ostream& out) {
  const auto spec = detail::resolve_spec(cfg);
  const detail::OutputDir dir(cfg.out, cfg.force, {"front.csv"});
  const auto space = enumerate_trajectories(spec, {.horizon = std::nullopt, .epsilon = cfg.epsilon, .threads = cfg.threads});
  const auto front = pareto_front(space);
  const auto comps = front_components(space, front);
  dir.write_with("front.csv", [&](auto& os) { report::write_front_csv(os, space, front, comps); });
  out << "front: " << front.front_ids.size() << " of " << space.size() << " trajectories in " << comps.size()
      << " component(s)\n";
  return kOk;
}

struct TrapAnalysis {
  TrajectorySpace space;
  FrontResult front;
  std::vector<std::vector<std::size_t>> components;
  std::vector<Trap> traps;
  std::vector<TediReport> tedi;
  std::optional<CeilingAnalysis> ceiling;
};

inline TrapAnalysis analyze_traps(const RunConfig& cfg, const EnvironmentSpec& spec) {
  TrapAnalysis a;
  a.space = enumerate_trajectories(spec, {.horizon = std::nullopt, .epsilon = cfg.epsilon, .threads = cfg.threads});
  a.front = pareto_front(a.space);
  a.components = front_components(a.space, a.front);
  a.traps = detect_traps_strict(a.space, {}, cfg.threads);
  const auto f = detail::resolve_scalarization(cfg, spec);
  if (!cfg.policy.empty()) {
    if (cfg.runs == 0) throw usage_error("--runs: must be >= 1");
    const auto policy = detail::resolve_policy(cfg.policy);
    const auto seeds = detail::seed_set(detail::resolve_seed(cfg), cfg.runs);
    CeilingAnalysis c;
    c.trap = detect_trap_confinement(spec, policy, a.space, seeds);
    c.global = global_ceiling(a.space, f);
    c.policy = ceiling(a.space, c.trap.member_ids, f);
    c.gap = c.global - c.policy;
    a.traps.push_back(c.trap);
    a.ceiling = std::move(c);
  }
  const auto w = detail::resolve_tedi_weights(cfg);
  for (const auto& t : a.traps) a.tedi.push_back(tedi_for_trap(a.space, t, std::nullopt, w, f));
  return a;
}

inline int cmd_analyze(const RunConfig& cfg, const std::string& policy_flag, std::ostream& out, std::ostream& err) {
  RunConfig c = cfg;
  c.policy = policy_flag;
  const auto spec = detail::resolve_spec(c);
  std::vector<std::string> files = {"front.csv", "traps.json", "tedi.csv"};
  if (!policy_flag.empty()) files.push_back("ceiling.json");
  const detail::OutputDir dir(c.out, c.force, files);
  const auto a = analyze_traps(c, spec);
  const auto f = detail::resolve_scalarization(c, spec);
  for (const auto& r : a.tedi)
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';

  dir.write_with("front.csv", [&](auto& os) { report::write_front_csv(os, a.space, a.front, a.components); });
  dir.write("traps.json", report::traps_json(a.space, a.traps, f).dump(2) + "\n");
  dir.write_with("tedi.csv", [&](auto& os) { report::write_tedi_csv(os, a.tedi); });
  out << "space: " << a.space.size() << " trajectories, front " << a.front.front_ids.size() << ", traps "
      << a.traps.size() << '\n';
  if (a.ceiling) {
    const nlohmann::json cj = {{"policy", policy_flag},
                               {"global_ceiling", a.ceiling->global},
                               {"policy_ceiling", a.ceiling->policy},
                               {"gap", a.ceiling->gap},
                               {"confinement_threshold", *a.ceiling->trap.confinement_threshold}};
    dir.write("ceiling.json", cj.dump(2) + "\n");
    out << "ceiling gap (" << policy_flag << "): " << report::fmt(a.ceiling->gap) << '\n';
  }
  return kOk;
}

inline int cmd_tedi(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto w = detail::resolve_tedi_weights(cfg);
  if (!cfg.components.empty()) {
    const auto c = detail::parse_list(cfg.components, "--components");
    if (c.size() != 3) throw usage_error("--components: expected D,S,B");
    TediReport r;
    try {
      r = tedi(c[0], c[1], c[2], w);
    } catch (const std::invalid_argument& e) {
      throw usage_error(std::string("--components: ") + e.what());
    }
    const nlohmann::json j = {{"D", r.escape_distance}, {"S_structural", r.structural}, {"B", r.inertia},
                              {"alpha", w.alpha},       {"beta", w.beta},             {"gamma", w.gamma},
                              {"tedi", r.value},        {"category", to_string(r.category)}};
    out << j.dump(2) << '\n';
    return kOk;
  }
  RunConfig c = cfg;
  c.policy.clear();
  const auto spec = detail::resolve_spec(c);
  const detail::OutputDir dir(c.out, c.force, {"tedi.csv"});
  const auto a = analyze_traps(c, spec);
  for (const auto& r : a.tedi)
    for (const auto& msg : r.warnings) err << "warning: " << msg << '\n';
  dir.write_with("tedi.csv", [&](auto& os) { report::write_tedi_csv(os, a.tedi); });
  for (std::size_t i = 0; i < a.tedi.size(); ++i)
    out << "trap " << i << ": tedi " << report::fmt(a.tedi[i].value) << " (" << to_string(a.tedi[i].category) << ")\n";
  return kOk;
}

inline void write_compare_svgs(const detail::OutputDir& dir, const EnvironmentSpec& spec, const ComparisonReport& r) {
  std::vector<svg::Series> states, cum, scatter;
  for (const auto& b : r.batches) {
    svg::Series s{b.policy.name(), {}}, j{b.policy.name(), {}}, p{b.policy.name(), {}};
    for (std::size_t t = 0; t < b.mean_state.size(); ++t) {
      s.points.emplace_back(static_cast<double>(t), b.mean_state[t]);
      j.points.emplace_back(static_cast<double>(t), b.mean_cum_j1[t]);
    }
    for (const auto& c : b.costs) p.points.emplace_back(c[0], c.size() > 1 ? c[1] : 0.0);
    states.push_back(std::move(s));
    cum.push_back(std::move(j));
    scatter.push_back(std::move(p));
  }
  std::vector<std::pair<double, double>> front;
  for (auto id : r.pooled_front.front_ids) {
    const auto& c = r.pooled[id].cost;
    front.emplace_back(c[0], c.size() > 1 ? c[1] : 0.0);
  }
  std::vector<std::string> state_labels, action_labels;
  for (int x = 0; x < spec.n_states; ++x) state_labels.push_back(std::to_string(x));
  for (const auto& a : spec.actions) action_labels.push_back(a.name);
  std::vector<svg::BarGroup> finals, actions;
  for (const auto& b : r.batches) {
    svg::BarGroup fg{b.policy.name(), {}}, ag{b.policy.name(), {}};
    for (auto n : b.final_state_histogram) fg.values.push_back(static_cast<double>(n) / static_cast<double>(b.run_count()));
    double total = 0.0;
    for (auto n : b.action_counts) total += static_cast<double>(n);
    for (auto n : b.action_counts) ag.values.push_back(static_cast<double>(n) / total);
    finals.push_back(std::move(fg));
    actions.push_back(std::move(ag));
  }
  dir.write("state_evolution.svg", svg::line_chart("State evolution", "step", "mean state", states));
  dir.write("cost_scatter.svg", svg::scatter_chart("Accumulated costs", "J1", "J2", scatter, front));
  dir.write("final_states.svg", svg::bar_chart("Final state distribution", "final state", "fraction of runs",
                                               state_labels, finals));
  dir.write("action_frequency.svg", svg::bar_chart("Action frequency", "action", "fraction of steps", action_labels, actions));
  dir.write("cumulative_j1.svg", svg::line_chart("Cumulative J1", "step", "mean cumulative J1", cum));
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  if (cfg.runs == 0) throw usage_error("--runs: must be >= 1");
  std::vector<PolicySpec> policies;
  {
    std::stringstream ss(cfg.policies);
    std::string name;
    while (std::getline(ss, name, ',')) policies.push_back(detail::resolve_policy(name));
  }
  if (policies.size() < 2) throw usage_error("--policies: need at least two policies");
  const auto spec = detail::resolve_spec(cfg);
  const auto seed = detail::resolve_seed(cfg);
  std::vector<std::string> files = {"trajectories.csv", "stats.csv",   "actions.csv",
                                    "curves.csv",       "scatter.csv", "opportunity.csv"};
  if (cfg.svg)
    for (const char* f : {"state_evolution.svg", "cost_scatter.svg", "final_states.svg", "action_frequency.svg",
                          "cumulative_j1.svg"})
      files.emplace_back(f);
  if (cfg.json) files.push_back("summary.json");
  const detail::OutputDir dir(cfg.out, cfg.force, files);

  const auto r = compare_policies(spec, policies, cfg.runs, seed, cfg.threads);
  dir.write_with("trajectories.csv", [&](auto& os) {
    // run ids are offset per policy so the file keys stay unique
    std::vector<report::LabeledTrajectory> rows;
    for (std::size_t p = 0; p < r.batches.size(); ++p)
      for (const auto& run : r.batches[p].runs) rows.push_back({p * cfg.runs + run.run_id, &run.trajectory});
    report::write_trajectories_csv(os, spec, rows);
  });
  dir.write_with("stats.csv", [&](auto& os) { report::write_stats_csv(os, r.batches); });
  dir.write_with("actions.csv", [&](auto& os) { report::write_actions_csv(os, spec, r.batches); });
  dir.write_with("curves.csv", [&](auto& os) { report::write_curves_csv(os, r.batches); });
  dir.write_with("scatter.csv", [&](auto& os) { report::write_scatter_csv(os, r); });
  dir.write_with("opportunity.csv", [&](auto& os) { report::write_opportunity_csv(os, r); });
  if (cfg.svg) write_compare_svgs(dir, spec, r);
  if (cfg.json) {
    auto j = nlohmann::json::array();
    for (const auto& b : r.batches) j.push_back(detail::batch_summary(b));
    dir.write("summary.json", j.dump(2) + "\n");
  }
  out << "compared " << policies.size() << " policies over " << cfg.runs << " runs on " << spec.name << " (seed "
      << seed << ")\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Trajectory-level Pareto trap analysis"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string env_action;
  std::string analyze_policy;

  auto add_env = [&](CLI::App* sub) { sub->add_option("--env", cfg.env_ref, "builtin:NAME or path to a JSON environment"); };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output directory (created if absent)");
    sub->add_flag("--force", cfg.force, "overwrite existing output files");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--runs", cfg.runs, "number of rollouts");
    sub->add_option("--seed", cfg.seed, "base seed (falls back to PTL_SEED, then 0)");
  };
  auto add_space = [&](CLI::App* sub) {
    sub->add_option("--horizon", cfg.horizon, "override the environment horizon");
    sub->add_option("--epsilon", cfg.epsilon, "Hamming radius of trajectory neighborhoods")->check(CLI::NonNegativeNumber);
  };

  auto* env = app.add_subcommand("env", "list builtin environments or print one as JSON");
  env->add_option("action", env_action, "list | show")->required();
  add_env(env);

  auto* simulate = app.add_subcommand("simulate", "run a seeded batch of rollouts");
  add_env(simulate);
  simulate->add_option("--policy", cfg.policy, "pointwise | trajectory | random");
  add_seed(simulate);
  simulate->add_option("--horizon", cfg.horizon, "override the environment horizon");
  simulate->add_flag("--json", cfg.json, "also write summary.json");
  add_out(simulate);

  auto* enumerate = app.add_subcommand("enumerate", "enumerate every trajectory of a deterministic environment");
  add_env(enumerate);
  add_space(enumerate);
  add_out(enumerate);

  auto* front = app.add_subcommand("front", "exact trajectory-Pareto front and its components");
  add_env(front);
  add_space(front);
  add_out(front);

  auto* analyze = app.add_subcommand("analyze", "front, traps, ceilings and TEDI of an enumerated space");
  add_env(analyze);
  add_space(analyze);
  analyze->add_option("--policy", analyze_policy, "also analyze this policy's confinement trap and ceiling gap");
  add_seed(analyze);
  analyze->add_option("--weights", cfg.weights, "TEDI weights alpha,beta,gamma");
  analyze->add_option("--scalar-weights", cfg.scalar_weights, "scalarization weights w1,...,wm");
  add_out(analyze);

  auto* compare = app.add_subcommand("compare", "compare policies on identical seeds");
  add_env(compare);
  compare->add_option("--policies", cfg.policies, "comma-separated policy names");
  add_seed(compare);
  compare->add_option("--horizon", cfg.horizon, "override the environment horizon");
  compare->add_flag("--svg", cfg.svg, "also write SVG panels");
  compare->add_flag("--json", cfg.json, "also write summary.json");
  add_out(compare);

  auto* tedi_cmd = app.add_subcommand("tedi", "TEDI from components, or for every strict trap of an environment");
  add_env(tedi_cmd);
  add_space(tedi_cmd);
  tedi_cmd->add_option("--components", cfg.components, "D,S,B");
  tedi_cmd->add_option("--weights", cfg.weights, "TEDI weights alpha,beta,gamma");
  tedi_cmd->add_option("--scalar-weights", cfg.scalar_weights, "scalarization weights w1,...,wm");
  add_out(tedi_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (env->parsed()) return cmd_env(cfg, env_action, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (enumerate->parsed()) return cmd_enumerate(cfg, out);
    if (front->parsed()) return cmd_front(cfg, out);
    if (analyze->parsed()) return cmd_analyze(cfg, analyze_policy, out, err);
    if (compare->parsed()) return cmd_compare(cfg, out);
    if (tedi_cmd->parsed()) return cmd_tedi(cfg, out, err);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const spec_error& e) {
    err << "invalid spec: " << e.what() << '\n';
    return kInvalidSpec;
  } catch (const infeasible_error& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ptl::cli
