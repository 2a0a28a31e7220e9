#pragma once

// Outage burstiness of a stationary chain.
//
// xi_ij(k) is the probability of going from s_i to s_j in k steps while every
// intermediate state (steps 1..k-1) is an outage state:
//   xi(1) = P,   xi(k) = P * M * xi(k-1),   M = diag(outage mask).
// Weighted by the stationary distribution over a source set A and summed over
// a destination set B this gives xi_AB(k). From it:
//   P(T_out = t) = xi_res,res(t+1) / xi_res,out(1)
//   E[T_out]     = 1 + sum_{t>=2} xi_res,out(t) / xi_res,out(1)
//   E[T_res]     = (1 - P_out) / xi_res,out(1)
//   P_out        = xi_res,out(1) * E[T_out]

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "aoi/error.hpp"
#include "aoi/markov_core.hpp"

namespace aoi {

/// How an observed run of outage periods maps onto a duration value.
/// OutagePeriods: T_out = number of consecutive outage periods, which is what
/// the PMF and mean formulas above count. RunPlusOne: T_out also counts the
/// residual period that opens the burst.
enum class DurationConvention { OutagePeriods, RunPlusOne };

inline std::string_view to_string(DurationConvention c) noexcept {
  return c == DurationConvention::OutagePeriods ? "outage-periods" : "run-plus-one";
}

inline std::int64_t measured_duration(std::int64_t run_length, DurationConvention c) noexcept {
  return c == DurationConvention::OutagePeriods ? run_length : run_length + 1;
}

inline constexpr double kSeriesTolerance = 1e-12;
inline constexpr std::int64_t kSeriesCap = 10000;

namespace detail {

inline Eigen::VectorXd mask_vector(const std::vector<bool>& mask) {
  Eigen::VectorXd m(static_cast<Eigen::Index>(mask.size()));
  for (std::size_t i = 0; i < mask.size(); ++i) m[static_cast<Eigen::Index>(i)] = mask[i] ? 1.0 : 0.0;
  return m;
}

inline double masked_sum(const Eigen::VectorXd& v, const std::vector<bool>& mask, bool want) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i] == want) acc += v[static_cast<Eigen::Index>(i)];
  return acc;
}

inline void check_sizes(const SteadyState& ss, const TransitionMatrix& t, const std::vector<bool>& mask) {
  if (t.p.rows() != t.p.cols() || ss.size() != t.size() ||
      static_cast<std::size_t>(t.size()) != mask.size())
    detail::fail_arg("steady state, transition matrix and outage mask sizes disagree");
}

/// Row-vector walk for xi_{A,.}(k): v_1 = pi_A P, v_k = (v_{k-1} .* m) P.
/// Stored as column vectors (transposed).
class XiWalk {
public:
  XiWalk(const SteadyState& ss, const TransitionMatrix& t, const std::vector<bool>& mask, bool from_outage)
      : pt_(t.p.transpose()), m_(mask_vector(mask)) {
    Eigen::VectorXd src = ss.pi;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i] != from_outage) src[static_cast<Eigen::Index>(i)] = 0.0;
    v_ = pt_ * src;
  }

  const Eigen::VectorXd& current() const noexcept { return v_; }
  void advance() { v_ = pt_ * v_.cwiseProduct(m_); }

private:
  Eigen::MatrixXd pt_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
};

}  // namespace detail

/// xi(k) as a full matrix.
inline Eigen::MatrixXd xi_matrix(const TransitionMatrix& t, const std::vector<bool>& outage, std::int64_t k) {
  if (k < 1) detail::fail_arg("xi_matrix requires k >= 1");
  if (t.p.rows() != t.p.cols() || static_cast<std::size_t>(t.size()) != outage.size())
    detail::fail_arg("outage mask length does not match the transition matrix");
  const Eigen::VectorXd m = detail::mask_vector(outage);
  const Eigen::MatrixXd pm = t.p * m.asDiagonal();
  Eigen::MatrixXd xi = t.p;
  for (std::int64_t step = 2; step <= k; ++step) xi = pm * xi;
  return xi;
}

inline double xi_set_to_set(const SteadyState& ss, const TransitionMatrix& t, const std::vector<bool>& outage,
                            bool from_outage, bool to_outage, std::int64_t k) {
  if (k < 1) detail::fail_arg("xi_set_to_set requires k >= 1");
  detail::check_sizes(ss, t, outage);
  detail::XiWalk walk(ss, t, outage, from_outage);
  for (std::int64_t step = 2; step <= k; ++step) walk.advance();
  return detail::masked_sum(walk.current(), outage, to_outage);
}

inline double xi_set_to_set(const SteadyState& ss, const TransitionMatrix& t, bool from_outage, bool to_outage,
                            std::int64_t k, const SystemConfig& cfg) {
  return xi_set_to_set(ss, t, outage_mask(cfg.a_max, cfg.a_out), from_outage, to_outage, k);
}

/// P(T_out = t) for t = 1..t_max (entry t-1 holds t).
inline std::vector<double> outage_duration_pmf(const SteadyState& ss, const TransitionMatrix& t,
                                               const std::vector<bool>& outage, std::int64_t t_max) {
  if (t_max < 1) detail::fail_arg("t_max must be >= 1");
  detail::check_sizes(ss, t, outage);
  detail::XiWalk walk(ss, t, outage, false);
  const double entry = detail::masked_sum(walk.current(), outage, true);
  if (!(entry > 0.0)) detail::fail_num("outage set is unreachable from the residual set");

  std::vector<double> pmf;
  pmf.reserve(static_cast<std::size_t>(t_max));
  for (std::int64_t d = 1; d <= t_max; ++d) {
    walk.advance();
    pmf.push_back(detail::masked_sum(walk.current(), outage, false) / entry);
  }
  return pmf;
}

inline std::vector<double> outage_duration_pmf(const SteadyState& ss, const TransitionMatrix& t,
                                               const SystemConfig& cfg, std::int64_t t_max) {
  return outage_duration_pmf(ss, t, outage_mask(cfg.a_max, cfg.a_out), t_max);
}

/// E[T_out] by the series above. Terms are summed until term / xi(1) drops
/// below `tolerance`, then a geometric tail from the last two terms is added.
inline double mean_outage_duration(const SteadyState& ss, const TransitionMatrix& t, const std::vector<bool>& outage,
                                   double tolerance = kSeriesTolerance) {
  detail::check_sizes(ss, t, outage);
  detail::XiWalk walk(ss, t, outage, false);
  const double entry = detail::masked_sum(walk.current(), outage, true);
  if (!(entry > 0.0)) detail::fail_num("outage set is unreachable from the residual set");

  double sum = 1.0;
  double prev = 1.0;
  for (std::int64_t d = 2; d <= kSeriesCap; ++d) {
    walk.advance();
    const double term = detail::masked_sum(walk.current(), outage, true) / entry;
    sum += term;
    if (term < tolerance) {
      const double ratio = term / prev;
      if (ratio > 0.0 && ratio < 1.0) sum += term * ratio / (1.0 - ratio);
      return sum;
    }
    prev = term;
  }
  detail::fail_num("outage-duration series did not decay within " + std::to_string(kSeriesCap) + " terms");
}

inline double mean_outage_duration(const SteadyState& ss, const TransitionMatrix& t, const SystemConfig& cfg,
                                   double tolerance = kSeriesTolerance) {
  return mean_outage_duration(ss, t, outage_mask(cfg.a_max, cfg.a_out), tolerance);
}

inline double mean_ioi(const SteadyState& ss, const TransitionMatrix& t, const std::vector<bool>& outage) {
  const double entry = xi_set_to_set(ss, t, outage, false, true, 1);
  if (!(entry > 0.0)) detail::fail_num("mean IoI undefined: outage set is unreachable");
  return (1.0 - detail::masked_sum(ss.pi, outage, true)) / entry;
}

inline double mean_ioi(const SteadyState& ss, const TransitionMatrix& t, const SystemConfig& cfg) {
  return mean_ioi(ss, t, outage_mask(cfg.a_max, cfg.a_out));
}

struct BurstStats {
  bool defined = false;  // false when the outage set is empty or unreachable
  std::string undefined_reason;
  DurationConvention convention = DurationConvention::OutagePeriods;

  double p_out = 0.0;           // stationary outage mass
  double p_out_identity = 0.0;  // xi_res_out_1 * mean_outage_duration
  double xi_res_out_1 = 0.0;
  double mean_outage_duration = 0.0;
  double mean_ioi = 0.0;
  std::vector<double> duration_pmf;  // entry t-1 is P(T_out = t)
  std::int64_t truncation_t = 0;
  double truncation_residual = 0.0;  // 1 - sum(duration_pmf)
};

inline constexpr double kIdentityTolerance = 1e-9;

/// Burst statistics of an already-solved chain.
inline BurstStats burst_stats(const std::vector<bool>& outage, const TransitionMatrix& t, const SteadyState& ss,
                              DurationConvention convention = DurationConvention::OutagePeriods) {
  detail::check_sizes(ss, t, outage);
  BurstStats b;
  b.convention = convention;
  b.p_out = detail::masked_sum(ss.pi, outage, true);
  b.xi_res_out_1 = xi_set_to_set(ss, t, outage, false, true, 1);
  bool any_outage = false;
  for (bool o : outage) any_outage = any_outage || o;
  if (!any_outage) {
    b.undefined_reason = "outage set is empty";
    return b;
  }
  if (!(b.xi_res_out_1 > 0.0)) {
    b.undefined_reason = "outage set is unreachable from the residual set";
    return b;
  }
  b.defined = true;
  b.mean_outage_duration = mean_outage_duration(ss, t, outage);
  b.mean_ioi = (1.0 - b.p_out) / b.xi_res_out_1;
  b.p_out_identity = b.xi_res_out_1 * b.mean_outage_duration;
  if (!(std::abs(b.p_out - b.p_out_identity) < kIdentityTolerance))
    detail::fail_num("P_out identity violated: stationary " + std::to_string(b.p_out) + " vs burst " +
                     std::to_string(b.p_out_identity));

  // Extend the PMF until the missing mass is below the series tolerance.
  detail::XiWalk walk(ss, t, outage, false);
  double mass = 0.0;
  for (std::int64_t d = 1; d <= kSeriesCap; ++d) {
    walk.advance();
    const double p = detail::masked_sum(walk.current(), outage, false) / b.xi_res_out_1;
    b.duration_pmf.push_back(p);
    mass += p;
    if (1.0 - mass < kSeriesTolerance) break;
  }
  b.truncation_t = static_cast<std::int64_t>(b.duration_pmf.size());
  b.truncation_residual = 1.0 - mass;
  return b;
}

inline BurstStats burst_stats(const SystemConfig& cfg, const TransitionMatrix& t, const SteadyState& ss,
                              DurationConvention convention = DurationConvention::OutagePeriods) {
  return burst_stats(outage_mask(cfg.a_max, cfg.a_out), t, ss, convention);
}

inline BurstStats burst_stats(const SystemConfig& cfg, const Policy& policy,
                              DurationConvention convention = DurationConvention::OutagePeriods) {
  const TransitionMatrix t = build_transition_matrix(cfg, policy);
  return burst_stats(cfg, t, steady_state(t), convention);
}

}  // namespace aoi
