#pragma once

// Transition law of the truncated AoI chain under a blocklength policy,
// dense transition matrices, stationary distributions and analytic outage
// probability.
//
// Timing: the allocation and both error rates for the step out of state
// phi_k are taken from phi_k itself (its AoI pair selects lambda, its channel
// bits select the SNRs). The channel bits of phi_{k+1} are fresh Bernoulli
// draws. On failure the AoI is clamped at A_max so the matrix stays
// row-stochastic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aoi/error.hpp"
#include "aoi/fbl_phy.hpp"
#include "aoi/state_space.hpp"

namespace aoi {

/// Blocklength given to device 1 in each state (ordinal order); device 2
/// receives N - lambda.
struct Policy {
  std::vector<std::int64_t> lambda;

  std::size_t size() const noexcept { return lambda.size(); }
  std::int64_t operator[](std::size_t ordinal) const { return lambda[ordinal]; }

  friend bool operator==(const Policy&, const Policy&) = default;

  void validate(const SystemConfig& cfg) const {
    if (lambda.size() != cfg.num_states())
      detail::fail_arg("policy has " + std::to_string(lambda.size()) + " entries, expected " +
                       std::to_string(cfg.num_states()));
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (lambda[i] < 0 || lambda[i] > cfg.blocklength())
        detail::fail_arg("policy entry for state index " + std::to_string(i + 1) + " is " +
                         std::to_string(lambda[i]) + ", outside [0, " +
                         std::to_string(cfg.blocklength()) + "]");
    }
  }
};

struct TransitionMatrix {
  Eigen::MatrixXd p;

  Eigen::Index size() const noexcept { return p.rows(); }

  double max_row_sum_error() const {
    return (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  }
};

struct SteadyState {
  Eigen::VectorXd pi;

  Eigen::Index size() const noexcept { return pi.size(); }
  double operator[](Eigen::Index i) const { return pi[i]; }
};

/// The chain's building blocks for one config: cached error rates, the
/// enumerated states and the outage mask. Cheap to copy; immutable.
class ChainModel {
public:
  explicit ChainModel(const SystemConfig& cfg)
      : cfg_(validated(cfg)),
        eps_(cfg_.profile, cfg_.link),
        states_(enumerate_states(cfg.a_max)),
        outage_(outage_mask(cfg.a_max, cfg.a_out)) {}

  const SystemConfig& config() const noexcept { return cfg_; }
  const ErrorRateTable& error_rates() const noexcept { return eps_; }
  const std::vector<SystemState>& states() const noexcept { return states_; }
  const std::vector<bool>& outage() const noexcept { return outage_; }
  std::size_t num_states() const noexcept { return states_.size(); }

  /// Calls fn(successor_ordinal, probability) for every successor of `from`
  /// with non-structural-zero probability under allocation `lambda`.
  template <typename Fn>
  void for_each_successor(std::int64_t lambda, const SystemState& from, Fn&& fn) const {
    const std::int64_t n = cfg_.blocklength();
    if (lambda < 0 || lambda > n)
      detail::fail_arg("allocation " + std::to_string(lambda) + " outside [0, " + std::to_string(n) + "]");
    const double e1 = eps_(lambda, from.x1 == 1);
    const double e2 = eps_(n - lambda, from.x2 == 1);

    struct Outcome {
      int aoi;
      double prob;
    };
    auto outcomes = [&](int aoi, double eps, Outcome (&out)[2]) -> int {
      const int next = std::min(aoi + 1, cfg_.a_max);
      if (next == 1) {
        out[0] = {1, 1.0};
        return 1;
      }
      out[0] = {1, 1.0 - eps};
      out[1] = {next, eps};
      return 2;
    };
    Outcome o1[2], o2[2];
    const int k1 = outcomes(from.a1, e1, o1);
    const int k2 = outcomes(from.a2, e2, o2);

    const double px1[2] = {1.0 - cfg_.profile.alpha[0], cfg_.profile.alpha[0]};
    const double px2[2] = {1.0 - cfg_.profile.alpha[1], cfg_.profile.alpha[1]};
    for (int u = 0; u < k1; ++u) {
      for (int v = 0; v < k2; ++v) {
        const double p_aoi = o1[u].prob * o2[v].prob;
        for (int x1 = 0; x1 < 2; ++x1) {
          for (int x2 = 0; x2 < 2; ++x2) {
            const SystemState to{o1[u].aoi, o2[v].aoi, x1, x2};
            fn(state_ordinal(to, cfg_.a_max), p_aoi * (px1[x1] * px2[x2]));
          }
        }
      }
    }
  }

  TransitionMatrix build(const Policy& policy) const {
    policy.validate(cfg_);
    const auto n = static_cast<Eigen::Index>(num_states());
    TransitionMatrix t{Eigen::MatrixXd::Zero(n, n)};
    for (std::size_t i = 0; i < num_states(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      for_each_successor(policy[i], states_[i], [&](std::size_t j, double p) {
        t.p(row, static_cast<Eigen::Index>(j)) += p;
      });
    }
    return t;
  }

  double outage_probability(const SteadyState& ss) const {
    if (static_cast<std::size_t>(ss.size()) != num_states())
      detail::fail_arg("steady state length does not match the state space");
    double acc = 0.0;
    for (std::size_t i = 0; i < num_states(); ++i)
      if (outage_[i]) acc += ss[static_cast<Eigen::Index>(i)];
    return acc;
  }

private:
  static const SystemConfig& validated(const SystemConfig& cfg) {
    cfg.validate();
    return cfg;
  }

  SystemConfig cfg_;
  ErrorRateTable eps_;
  std::vector<SystemState> states_;
  std::vector<bool> outage_;
};

/// Prob(phi_{k+1} = to | phi_k = from) when device 1 gets `lambda` symbols.
inline double transition_prob(const SystemConfig& cfg, std::int64_t lambda, const SystemState& from,
                              const SystemState& to) {
  cfg.validate();
  if (lambda < 0 || lambda > cfg.blocklength())
    detail::fail_arg("allocation " + std::to_string(lambda) + " outside [0, " +
                     std::to_string(cfg.blocklength()) + "]");
  if (!from.valid(cfg.a_max) || !to.valid(cfg.a_max)) detail::fail_arg("state outside the state space");

  const double e1 = block_error_rate(lambda, cfg.link.payload_bits,
                                     db_to_linear(from.x1 ? cfg.profile.gamma_good_db : cfg.profile.gamma_bad_db));
  const double e2 = block_error_rate(cfg.blocklength() - lambda, cfg.link.payload_bits,
                                     db_to_linear(from.x2 ? cfg.profile.gamma_good_db : cfg.profile.gamma_bad_db));

  // Probability that device AoI moves from `a` to `a_next`.
  auto aoi_prob = [&](int a, int a_next, double eps) {
    const int fail_next = std::min(a + 1, cfg.a_max);
    double p = 0.0;
    if (a_next == 1 && fail_next == 1) return 1.0;
    if (a_next == 1) p += 1.0 - eps;
    if (a_next == fail_next) p += eps;
    return p;
  };
  const double p1 = aoi_prob(from.a1, to.a1, e1);
  const double p2 = aoi_prob(from.a2, to.a2, e2);
  const double px1 = to.x1 ? cfg.profile.alpha[0] : 1.0 - cfg.profile.alpha[0];
  const double px2 = to.x2 ? cfg.profile.alpha[1] : 1.0 - cfg.profile.alpha[1];
  return (p1 * p2) * (px1 * px2);
}

inline TransitionMatrix build_transition_matrix(const SystemConfig& cfg, const Policy& policy) {
  return ChainModel(cfg).build(policy);
}

/// Stationary distribution of an ergodic row-stochastic matrix. Solves
/// (I - P^T) pi = 0 with the last equation replaced by sum(pi) = 1.
inline SteadyState steady_state(const TransitionMatrix& t) {
  const Eigen::Index n = t.size();
  if (n == 0 || t.p.cols() != n) detail::fail_arg("transition matrix must be square and non-empty");
  if ((t.p.array() < 0.0).any() || (t.p.array() > 1.0).any())
    detail::fail_arg("transition matrix entries must lie in [0,1]");
  if (t.max_row_sum_error() > 1e-9) detail::fail_arg("transition matrix is not row-stochastic");

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - t.p.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[n - 1] = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) detail::fail_num("steady-state system is singular; the chain is not ergodic");
  Eigen::VectorXd pi = lu.solve(b);

  constexpr double kClip = 1e-14;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi[i] < -kClip)
      detail::fail_num("steady-state entry " + std::to_string(i + 1) + " is negative (" +
                       std::to_string(pi[i]) + ")");
    if (pi[i] < 0.0) pi[i] = 0.0;
  }
  pi /= pi.sum();

  const double residual = (t.p.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (!(residual < 1e-10))
    detail::fail_num("steady-state residual " + std::to_string(residual) + " exceeds 1e-10");
  return SteadyState{std::move(pi)};
}

/// max_j |(pi^T P)_j - pi_j|
inline double stationarity_residual(const SteadyState& ss, const TransitionMatrix& t) {
  return (t.p.transpose() * ss.pi - ss.pi).cwiseAbs().maxCoeff();
}

/// Row `initial_index` (1-based) of P^k by repeated vector-matrix products.
inline Eigen::VectorXd k_step_distribution(const TransitionMatrix& t, std::size_t initial_index,
                                           std::int64_t k) {
  const Eigen::Index n = t.size();
  if (initial_index < 1 || initial_index > static_cast<std::size_t>(n))
    detail::fail_arg("initial index out of range");
  if (k < 0) detail::fail_arg("k must be >= 0");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[static_cast<Eigen::Index>(initial_index - 1)] = 1.0;
  const Eigen::MatrixXd pt = t.p.transpose();
  for (std::int64_t step = 0; step < k; ++step) v = pt * v;
  return v;
}

inline double outage_probability(const SteadyState& ss, const SystemConfig& cfg) {
  const auto mask = outage_mask(cfg.a_max, cfg.a_out);
  if (static_cast<std::size_t>(ss.size()) != mask.size())
    detail::fail_arg("steady state length does not match the state space");
  double acc = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) acc += ss[static_cast<Eigen::Index>(i)];
  return acc;
}

inline double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

}  // namespace aoi
