#pragma once

// Seeded period-by-period simulation of the two-device system under a fixed
// policy, with empirical outage rate, burst and inter-outage statistics.
//
// Per period, from state phi = (a1, a2, x1, x2):
//   lambda = policy[phi]; eps_m from phi's channel bits (same timing as the
//   analytic chain); draw u1, u2, v1, v2 from uniform01() in that order;
//   device m fails iff u_m < eps_m; new bit x_m' = (v_m < alpha_m);
//   a_m' = 1 on success, min(a_m + 1, A_max) on failure.
// The period counts as an outage iff the new state is in the outage set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "aoi/error.hpp"
#include "aoi/markov_core.hpp"
#include "aoi/random.hpp"

namespace aoi {

struct BurstRuns {
  std::vector<std::int64_t> bursts;  // maximal runs of outage periods
  std::vector<std::int64_t> iois;    // maximal runs of non-outage periods
};

/// Run lengths of an outage indicator sequence. Runs touching either end of
/// the sequence are incomplete and dropped.
template <typename Seq>
BurstRuns measure_bursts(const Seq& outage) {
  BurstRuns runs;
  const auto n = static_cast<std::size_t>(std::size(outage));
  std::size_t start = 0;
  while (start < n) {
    const bool value = static_cast<bool>(outage[start]);
    std::size_t end = start;
    while (end < n && static_cast<bool>(outage[end]) == value) ++end;
    if (start > 0 && end < n) (value ? runs.bursts : runs.iois).push_back(static_cast<std::int64_t>(end - start));
    start = end;
  }
  return runs;
}

inline std::optional<double> mean_of(const std::vector<std::int64_t>& v) {
  if (v.empty()) return std::nullopt;
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  return total / static_cast<double>(v.size());
}

class Simulator {
public:
  Simulator(const ChainModel& model, const Policy& policy, std::uint64_t seed)
      : model_(&model), policy_(&policy), rng_(seed), state_(model.config().initial_state) {
    policy.validate(model.config());
  }

  const SystemState& state() const noexcept { return state_; }

  /// Advances one period; returns whether the new state is an outage.
  bool step() {
    const auto& cfg = model_->config();
    const std::int64_t lambda = (*policy_)[state_ordinal(state_, cfg.a_max)];
    const auto& eps = model_->error_rates();
    const double e1 = eps(lambda, state_.x1 == 1);
    const double e2 = eps(cfg.blocklength() - lambda, state_.x2 == 1);

    const bool fail1 = rng_.uniform01() < e1;
    const bool fail2 = rng_.uniform01() < e2;
    const int x1 = rng_.bernoulli(cfg.profile.alpha[0]) ? 1 : 0;
    const int x2 = rng_.bernoulli(cfg.profile.alpha[1]) ? 1 : 0;

    state_.a1 = fail1 ? std::min(state_.a1 + 1, cfg.a_max) : 1;
    state_.a2 = fail2 ? std::min(state_.a2 + 1, cfg.a_max) : 1;
    state_.x1 = x1;
    state_.x2 = x2;
    return is_outage(state_, cfg.a_out);
  }

private:
  const ChainModel* model_;
  const Policy* policy_;
  Rng rng_;
  SystemState state_;
};

struct SimResult {
  std::int64_t periods = 0;
  std::int64_t outage_count = 0;
  double outage_rate = 0.0;
  std::vector<std::int64_t> burst_durations;
  std::vector<std::int64_t> ioi_durations;
  std::optional<double> mean_burst;
  std::optional<double> mean_ioi;
  std::uint64_t seed = 0;
  SystemState final_state;
  std::vector<std::uint8_t> outage_sequence;  // one entry per period

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

inline SimResult simulate(const ChainModel& model, const Policy& policy, std::int64_t periods, std::uint64_t seed) {
  if (periods < 1) detail::fail_arg("periods must be >= 1");
  Simulator sim(model, policy, seed);
  SimResult r;
  r.periods = periods;
  r.seed = seed;
  r.outage_sequence.reserve(static_cast<std::size_t>(periods));
  for (std::int64_t k = 0; k < periods; ++k) {
    const bool out = sim.step();
    r.outage_sequence.push_back(out ? 1 : 0);
    r.outage_count += out ? 1 : 0;
  }
  r.outage_rate = static_cast<double>(r.outage_count) / static_cast<double>(periods);
  auto runs = measure_bursts(r.outage_sequence);
  r.burst_durations = std::move(runs.bursts);
  r.ioi_durations = std::move(runs.iois);
  r.mean_burst = mean_of(r.burst_durations);
  r.mean_ioi = mean_of(r.ioi_durations);
  r.final_state = sim.state();
  return r;
}

inline SimResult simulate(const SystemConfig& cfg, const Policy& policy, std::int64_t periods, std::uint64_t seed) {
  const ChainModel model(cfg);
  return simulate(model, policy, periods, seed);
}

/// ((measured - estimate) / measured)^2; empty when nothing was measured.
inline std::optional<double> normalized_error_power(std::optional<double> measured, double estimate) {
  if (!measured || *measured == 0.0 || !std::isfinite(*measured)) return std::nullopt;
  const double r = (*measured - estimate) / *measured;
  return r * r;
}

struct AnalyticPrediction {
  double p_out = 0.0;
  double mean_outage_duration = 0.0;
  double mean_ioi = 0.0;
};

struct RepetitionStats {
  std::int64_t reps = 0;
  std::int64_t periods = 0;
  std::uint64_t master_seed = 0;
  std::vector<SimResult> runs;

  double mean_outage_rate = 0.0;
  double stddev_outage_rate = 0.0;  // sample standard deviation
  double stderr_outage_rate = 0.0;
  std::vector<std::int64_t> pooled_bursts;
  std::vector<std::int64_t> pooled_iois;
  std::optional<double> mean_burst;
  std::optional<double> mean_ioi;

  // Filled when an analytic prediction is supplied.
  std::optional<double> error_p_out;
  std::optional<double> error_mean_burst;
  std::optional<double> error_mean_ioi;
};

/// Seed of repetition `i` under `master_seed`.
inline std::uint64_t repetition_seed(std::uint64_t master_seed, std::uint64_t i) noexcept {
  return split_seed(master_seed, i);
}

/// Aggregates independent runs. Sums are taken in seed order so the result
/// does not depend on the order of `runs`.
inline RepetitionStats aggregate_runs(std::vector<SimResult> runs, const std::optional<AnalyticPrediction>& analytic) {
  if (runs.empty()) detail::fail_arg("no runs to aggregate");
  std::stable_sort(runs.begin(), runs.end(), [](const SimResult& a, const SimResult& b) { return a.seed < b.seed; });

  RepetitionStats s;
  s.reps = static_cast<std::int64_t>(runs.size());
  s.periods = runs.front().periods;
  double sum = 0.0;
  for (const auto& r : runs) sum += r.outage_rate;
  s.mean_outage_rate = sum / static_cast<double>(runs.size());
  if (runs.size() > 1) {
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.outage_rate - s.mean_outage_rate) * (r.outage_rate - s.mean_outage_rate);
    s.stddev_outage_rate = std::sqrt(ss / static_cast<double>(runs.size() - 1));
    s.stderr_outage_rate = s.stddev_outage_rate / std::sqrt(static_cast<double>(runs.size()));
  }
  for (const auto& r : runs) {
    s.pooled_bursts.insert(s.pooled_bursts.end(), r.burst_durations.begin(), r.burst_durations.end());
    s.pooled_iois.insert(s.pooled_iois.end(), r.ioi_durations.begin(), r.ioi_durations.end());
  }
  s.mean_burst = mean_of(s.pooled_bursts);
  s.mean_ioi = mean_of(s.pooled_iois);
  if (analytic) {
    s.error_p_out = normalized_error_power(s.mean_outage_rate, analytic->p_out);
    s.error_mean_burst = normalized_error_power(s.mean_burst, analytic->mean_outage_duration);
    s.error_mean_ioi = normalized_error_power(s.mean_ioi, analytic->mean_ioi);
  }
  s.runs = std::move(runs);
  return s;
}

inline RepetitionStats run_repetitions(const SystemConfig& cfg, const Policy& policy, std::int64_t reps,
                                       std::int64_t periods, std::uint64_t master_seed,
                                       const std::optional<AnalyticPrediction>& analytic = std::nullopt) {
  if (reps < 1) detail::fail_arg("reps must be >= 1");
  const ChainModel model(cfg);
  std::vector<SimResult> runs;
  runs.reserve(static_cast<std::size_t>(reps));
  for (std::int64_t i = 0; i < reps; ++i)
    runs.push_back(simulate(model, policy, periods, repetition_seed(master_seed, static_cast<std::uint64_t>(i))));
  auto s = aggregate_runs(std::move(runs), analytic);
  s.master_seed = master_seed;
  return s;
}

}  // namespace aoi
