#pragma once

// Recursive policy optimizer: alternate between solving the stationary
// distribution of the current policy and re-choosing, for every state, the
// allocation that minimizes a one-step expected penalty weighted by that
// distribution. Also the two reference policies (equal split, minimum sum
// error rate).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "aoi/error.hpp"
#include "aoi/markov_core.hpp"
#include "aoi/random.hpp"

namespace aoi {

enum class PenaltyKind { BinaryOutage, MeanSumAoI, MeanPeakAoI, ExpMeanPeakAoI };

inline constexpr PenaltyKind kAllPenalties[] = {PenaltyKind::BinaryOutage, PenaltyKind::MeanSumAoI,
                                                PenaltyKind::MeanPeakAoI, PenaltyKind::ExpMeanPeakAoI};

inline std::string_view to_string(PenaltyKind k) noexcept {
  switch (k) {
    case PenaltyKind::BinaryOutage: return "binary";
    case PenaltyKind::MeanSumAoI: return "sum-aoi";
    case PenaltyKind::MeanPeakAoI: return "peak-aoi";
    case PenaltyKind::ExpMeanPeakAoI: return "exp-peak-aoi";
  }
  return "?";
}

inline PenaltyKind parse_penalty(std::string_view name) {
  for (auto k : kAllPenalties)
    if (to_string(k) == name) return k;
  detail::fail_arg("unknown penalty '" + std::string(name) +
                   "' (expected binary, sum-aoi, peak-aoi or exp-peak-aoi)");
}

/// Cost of landing in state `s`.
inline double penalty_weight(const SystemState& s, int a_out, PenaltyKind kind) noexcept {
  switch (kind) {
    case PenaltyKind::BinaryOutage: return is_outage(s, a_out) ? 1.0 : 0.0;
    case PenaltyKind::MeanSumAoI: return static_cast<double>(s.a1 + s.a2);
    case PenaltyKind::MeanPeakAoI: return static_cast<double>(std::max(s.a1, s.a2));
    case PenaltyKind::ExpMeanPeakAoI: return std::exp(static_cast<double>(std::max(s.a1, s.a2)));
  }
  return 0.0;
}

// Candidates within this relative distance of the minimum count as ties and
// the smallest allocation wins. Absorbs last-ulp noise from summation order.
inline constexpr double kArgminRelTol = 1e-12;

namespace detail {

/// First index whose value is within kArgminRelTol of the minimum.
inline std::size_t tie_break_argmin(const std::vector<double>& values) {
  double lo = std::numeric_limits<double>::infinity();
  for (double v : values) lo = std::min(lo, v);
  const double cut = lo + kArgminRelTol * std::abs(lo);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= cut) return i;
  return 0;
}

}  // namespace detail

/// Penalty evaluator bound to one config; holds per-state weights for each kind.
class PenaltyModel {
public:
  explicit PenaltyModel(const ChainModel& model) : model_(&model) {
    for (auto k : kAllPenalties) {
      auto& w = weights_[static_cast<int>(k)];
      w.reserve(model.num_states());
      for (const auto& s : model.states()) w.push_back(penalty_weight(s, model.config().a_out, k));
    }
  }

  const ChainModel& model() const noexcept { return *model_; }

  /// pi_i * sum_j w(s_j) * P(s_i -> s_j | lambda); `ordinal` is 0-based.
  double penalty(std::int64_t lambda, std::size_t ordinal, const SteadyState& ss, PenaltyKind kind) const {
    const auto& w = weights_[static_cast<int>(kind)];
    double acc = 0.0;
    model_->for_each_successor(lambda, model_->states()[ordinal],
                               [&](std::size_t j, double p) { acc += w[j] * p; });
    return ss[static_cast<Eigen::Index>(ordinal)] * acc;
  }

  /// Penalty of every allocation 0..N for one state.
  std::vector<double> sweep(std::size_t ordinal, const SteadyState& ss, PenaltyKind kind) const {
    const std::int64_t n = model_->config().blocklength();
    std::vector<double> values(static_cast<std::size_t>(n) + 1);
    for (std::int64_t lam = 0; lam <= n; ++lam)
      values[static_cast<std::size_t>(lam)] = penalty(lam, ordinal, ss, kind);
    return values;
  }

  Policy improve(const SteadyState& ss, PenaltyKind kind) const {
    if (static_cast<std::size_t>(ss.size()) != model_->num_states())
      detail::fail_arg("steady state length does not match the state space");
    Policy next;
    next.lambda.resize(model_->num_states());
    for (std::size_t i = 0; i < model_->num_states(); ++i)
      next.lambda[i] = static_cast<std::int64_t>(detail::tie_break_argmin(sweep(i, ss, kind)));
    return next;
  }

private:
  const ChainModel* model_;
  std::vector<double> weights_[4];
};

/// One-step expected penalty for leaving state `from_index` (1-based).
inline double penalty(const SystemConfig& cfg, std::int64_t lambda, std::size_t from_index,
                      const SteadyState& ss, PenaltyKind kind) {
  const ChainModel model(cfg);
  if (from_index < 1 || from_index > model.num_states()) detail::fail_arg("state index out of range");
  return PenaltyModel(model).penalty(lambda, from_index - 1, ss, kind);
}

inline Policy improve_policy(const SystemConfig& cfg, const SteadyState& ss, PenaltyKind kind) {
  const ChainModel model(cfg);
  return PenaltyModel(model).improve(ss, kind);
}

/// 2 * sqrt(||new - old||_2 / ||new + old||_2)
inline double convergence_metric(const Policy& next, const Policy& old) {
  if (next.size() != old.size()) detail::fail_arg("policies differ in length");
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double d = static_cast<double>(next[i] - old[i]);
    const double s = static_cast<double>(next[i] + old[i]);
    diff += d * d;
    sum += s * s;
  }
  if (sum == 0.0) detail::fail_arg("convergence metric undefined: both policies are all-zero");
  return 2.0 * std::sqrt(std::sqrt(diff) / std::sqrt(sum));
}

inline Policy naive_policy(const SystemConfig& cfg) {
  return Policy{std::vector<std::int64_t>(cfg.num_states(), cfg.blocklength() / 2)};
}

/// Per state, the split minimizing eps_1 + eps_2 for that state's channel bits.
inline Policy min_error_policy(const SystemConfig& cfg) {
  cfg.validate();
  const ErrorRateTable eps(cfg.profile, cfg.link);
  const std::int64_t n = cfg.blocklength();
  std::int64_t best[2][2];
  std::vector<double> sums(static_cast<std::size_t>(n) + 1);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      for (std::int64_t lam = 0; lam <= n; ++lam)
        sums[static_cast<std::size_t>(lam)] = eps(lam, x1 == 1) + eps(n - lam, x2 == 1);
      best[x1][x2] = static_cast<std::int64_t>(detail::tie_break_argmin(sums));
    }
  }
  Policy p;
  p.lambda.reserve(cfg.num_states());
  for (const auto& s : enumerate_states(cfg.a_max)) p.lambda.push_back(best[s.x1][s.x2]);
  return p;
}

/// Uniform allocation in {0..N} per state.
inline Policy random_policy(const SystemConfig& cfg, Rng& rng) {
  Policy p;
  p.lambda.resize(cfg.num_states());
  for (auto& l : p.lambda) l = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cfg.blocklength()) + 1));
  return p;
}

enum class Termination { Converged, MaxIterations, CycleDetected };

inline std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max-iterations";
    case Termination::CycleDetected: return "cycle-detected";
  }
  return "?";
}

struct TraceEntry {
  int iteration = 0;
  double metric = 0.0;
  double p_out = 0.0;
};

struct OptimizeReport {
  PenaltyKind kind = PenaltyKind::BinaryOutage;
  std::uint64_t seed = 0;
  Policy initial_policy;
  double initial_p_out = 0.0;
  Policy final_policy;
  double final_p_out = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> convergence_trace;
  Termination terminated_by = Termination::MaxIterations;

  friend bool operator==(const OptimizeReport& a, const OptimizeReport& b) {
    if (a.convergence_trace.size() != b.convergence_trace.size()) return false;
    for (std::size_t i = 0; i < a.convergence_trace.size(); ++i) {
      const auto &x = a.convergence_trace[i], &y = b.convergence_trace[i];
      if (x.iteration != y.iteration || x.metric != y.metric || x.p_out != y.p_out) return false;
    }
    return a.kind == b.kind && a.seed == b.seed && a.initial_policy == b.initial_policy &&
           a.initial_p_out == b.initial_p_out && a.final_policy == b.final_policy &&
           a.final_p_out == b.final_p_out && a.iterations == b.iterations &&
           a.terminated_by == b.terminated_by;
  }
};

inline constexpr int kDefaultMaxIterations = 200;

/// Runs the optimizer from a random initial policy drawn with `seed`.
/// Stops on convergence (metric <= epsilon_cvg), after `max_iter` updates,
/// or when an update reproduces an earlier policy. Without convergence the
/// iterate with the lowest analytic outage probability is reported.
inline OptimizeReport optimize(const SystemConfig& cfg, PenaltyKind kind, std::uint64_t seed,
                               int max_iter = kDefaultMaxIterations) {
  if (max_iter < 1) detail::fail_arg("max_iter must be >= 1");
  const ChainModel model(cfg);
  const PenaltyModel penalties(model);

  OptimizeReport report;
  report.kind = kind;
  report.seed = seed;

  Rng rng(seed);
  Policy policy = random_policy(cfg, rng);
  SteadyState ss = steady_state(model.build(policy));
  report.initial_policy = policy;
  report.initial_p_out = model.outage_probability(ss);

  Policy best = policy;
  double best_p_out = report.initial_p_out;
  std::vector<Policy> history{policy};

  report.terminated_by = Termination::MaxIterations;
  for (int it = 1; it <= max_iter; ++it) {
    const Policy old = policy;
    policy = penalties.improve(ss, kind);
    ss = steady_state(model.build(policy));
    const double p_out = model.outage_probability(ss);
    const double metric = (policy == old) ? 0.0 : convergence_metric(policy, old);
    report.convergence_trace.push_back({it, metric, p_out});
    if (p_out < best_p_out) {
      best_p_out = p_out;
      best = policy;
    }
    if (metric <= cfg.epsilon_cvg) {
      report.terminated_by = Termination::Converged;
      break;
    }
    if (std::find(history.begin(), history.end(), policy) != history.end()) {
      report.terminated_by = Termination::CycleDetected;
      break;
    }
    history.push_back(policy);
  }
  report.iterations = static_cast<int>(report.convergence_trace.size());

  if (report.terminated_by == Termination::Converged) {
    report.final_policy = policy;
    report.final_p_out = report.convergence_trace.back().p_out;
  } else {
    report.final_policy = best;
    report.final_p_out = best_p_out;
  }
  return report;
}

}  // namespace aoi
