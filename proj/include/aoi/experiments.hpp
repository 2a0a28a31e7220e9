#pragma once

// Experiment drivers shared by the CLI and the acceptance suite: policy
// evaluation, multi-seed optimization, the benchmark table across presets and
// the burst-statistics convergence study.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoi/burstiness.hpp"
#include "aoi/markov_core.hpp"
#include "aoi/montecarlo.hpp"
#include "aoi/policy_opt.hpp"
#include "aoi/scenario.hpp"
#include "aoi/table2_reference.hpp"

namespace aoi {

inline double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct PolicyEvaluation {
  double p_out = 0.0;
  double residual = 0.0;
  BurstStats burst;
};

inline PolicyEvaluation evaluate_policy(const SystemConfig& cfg, const Policy& policy,
                                        DurationConvention convention = DurationConvention::OutagePeriods) {
  const ChainModel model(cfg);
  const TransitionMatrix t = model.build(policy);
  const SteadyState ss = steady_state(t);
  PolicyEvaluation e;
  e.p_out = model.outage_probability(ss);
  e.residual = stationarity_residual(ss, t);
  e.burst = burst_stats(cfg, t, ss, convention);
  return e;
}

struct MultiSeedResult {
  std::vector<OptimizeReport> reports;
  std::size_t best = 0;  // index into reports with the lowest final P_out
  double best_p_out = 0.0;
  double median_p_out = 0.0;
};

/// Optimizer runs with seeds first_seed, first_seed + 1, ...
inline MultiSeedResult optimize_seeds(const SystemConfig& cfg, PenaltyKind kind, int seeds, std::uint64_t first_seed,
                                      int max_iter = kDefaultMaxIterations) {
  if (seeds < 1) detail::fail_arg("seeds must be >= 1");
  MultiSeedResult r;
  std::vector<double> p;
  for (int i = 0; i < seeds; ++i) {
    r.reports.push_back(optimize(cfg, kind, first_seed + static_cast<std::uint64_t>(i), max_iter));
    p.push_back(r.reports.back().final_p_out);
  }
  r.best = static_cast<std::size_t>(std::min_element(p.begin(), p.end()) - p.begin());
  r.best_p_out = p[r.best];
  r.median_p_out = median(p);
  return r;
}

struct Table2Row {
  std::string scenario;
  std::string policy;
  double analytic_p_out = 0.0;
  double empirical_mean = 0.0;
  double empirical_stderr = 0.0;
  std::optional<double> reference_p_out;
  std::optional<double> median_seed_p_out;  // optimized rows only
  std::optional<std::uint64_t> best_seed;   // optimized rows only
};

struct Table2Options {
  int seeds = 10;
  std::uint64_t first_seed = 0;
  int max_iter = kDefaultMaxIterations;
  std::int64_t reps = 100;
  std::int64_t periods = 2500;
  std::uint64_t master_seed = 20220101;
  std::optional<int> a_out_override;
};

/// 3 presets x (4 penalties + naive + min-error), analytic and simulated.
inline std::vector<Table2Row> reproduce_table2(const Table2Options& opt) {
  std::vector<Table2Row> rows;
  for (auto name : kPresetNames) {
    ScenarioConfig sc = make_preset(name);
    if (opt.a_out_override) sc.system.a_out = *opt.a_out_override;
    const SystemConfig& cfg = sc.system;
    const ChainModel model(cfg);
    const auto analytic = [&](const Policy& p) { return model.outage_probability(steady_state(model.build(p))); };

    auto add_row = [&](std::string policy_name, const Policy& p, Table2Row row) {
      row.scenario = std::string(name);
      row.policy = policy_name;
      row.analytic_p_out = analytic(p);
      const auto sim = run_repetitions(cfg, p, opt.reps, opt.periods, opt.master_seed);
      row.empirical_mean = sim.mean_outage_rate;
      row.empirical_stderr = sim.stderr_outage_rate;
      row.reference_p_out = reference_outage(policy_name, name);
      rows.push_back(std::move(row));
    };

    for (auto kind : kAllPenalties) {
      const auto ms = optimize_seeds(cfg, kind, opt.seeds, opt.first_seed, opt.max_iter);
      Table2Row row;
      row.median_seed_p_out = ms.median_p_out;
      row.best_seed = ms.reports[ms.best].seed;
      add_row(std::string(to_string(kind)), ms.reports[ms.best].final_policy, row);
    }
    add_row("naive", naive_policy(cfg), {});
    add_row("min-error", min_error_policy(cfg), {});
  }
  return rows;
}

inline const std::vector<std::int64_t>& default_checkpoints() {
  static const std::vector<std::int64_t> c{500, 1000, 2500, 5000, 10000};
  return c;
}

struct ConvergenceRow {
  int policy = 0;
  std::int64_t checkpoint = 0;
  double p_out_measured = 0.0, p_out_analytic = 0.0;
  std::optional<double> p_out_error;
  std::optional<double> burst_measured;
  double burst_analytic = 0.0;
  std::optional<double> burst_error;
  std::optional<double> ioi_measured;
  double ioi_analytic = 0.0;
  std::optional<double> ioi_error;
};

struct ConvergenceSummary {
  std::int64_t checkpoint = 0;
  double median_p_out_error = 0.0;
  double median_burst_error = 0.0;
  double median_ioi_error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSummary> summary;
  DurationConvention convention = DurationConvention::OutagePeriods;
};

/// Random policies, one long simulation each, statistics of every prefix
/// ending at a checkpoint compared with the analytic values. Policy p is
/// drawn from stream 2p of `master_seed` and simulated with stream 2p+1.
/// Errors are squared deviations normalized to the measured value.
inline ConvergenceStudy burst_convergence(const SystemConfig& cfg, int n_policies, std::uint64_t master_seed,
                                          const std::vector<std::int64_t>& checkpoints = default_checkpoints(),
                                          DurationConvention convention = DurationConvention::OutagePeriods) {
  if (n_policies < 1) detail::fail_arg("n_policies must be >= 1");
  if (checkpoints.empty()) detail::fail_arg("at least one checkpoint is required");
  const ChainModel model(cfg);
  const std::int64_t horizon = *std::max_element(checkpoints.begin(), checkpoints.end());

  ConvergenceStudy study;
  study.convention = convention;
  for (int p = 0; p < n_policies; ++p) {
    Rng rng(split_seed(master_seed, 2 * static_cast<std::uint64_t>(p)));
    const Policy policy = random_policy(cfg, rng);
    const TransitionMatrix t = model.build(policy);
    const SteadyState ss = steady_state(t);
    const BurstStats b = burst_stats(cfg, t, ss, convention);
    const SimResult sim = simulate(model, policy, horizon, split_seed(master_seed, 2 * static_cast<std::uint64_t>(p) + 1));

    for (auto c : checkpoints) {
      ConvergenceRow row;
      row.policy = p;
      row.checkpoint = c;
      const std::vector<std::uint8_t> prefix(sim.outage_sequence.begin(), sim.outage_sequence.begin() + c);
      std::int64_t outages = 0;
      for (auto o : prefix) outages += o;
      row.p_out_measured = static_cast<double>(outages) / static_cast<double>(c);
      row.p_out_analytic = b.p_out;
      row.p_out_error = normalized_error_power(row.p_out_measured, b.p_out);

      auto runs = measure_bursts(prefix);
      for (auto& d : runs.bursts) d = measured_duration(d, convention);
      row.burst_measured = mean_of(runs.bursts);
      row.ioi_measured = mean_of(runs.iois);
      if (b.defined) {
        row.burst_analytic = b.mean_outage_duration;
        row.ioi_analytic = b.mean_ioi;
        row.burst_error = normalized_error_power(row.burst_measured, b.mean_outage_duration);
        row.ioi_error = normalized_error_power(row.ioi_measured, b.mean_ioi);
      }
      study.rows.push_back(row);
    }
  }

  for (auto c : checkpoints) {
    std::vector<double> ep, eb, ei;
    for (const auto& r : study.rows) {
      if (r.checkpoint != c) continue;
      if (r.p_out_error) ep.push_back(*r.p_out_error);
      if (r.burst_error) eb.push_back(*r.burst_error);
      if (r.ioi_error) ei.push_back(*r.ioi_error);
    }
    study.summary.push_back({c, median(ep), median(eb), median(ei)});
  }
  return study;
}

}  // namespace aoi
