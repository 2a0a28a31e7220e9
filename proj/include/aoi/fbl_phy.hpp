#pragma once

// Physical-layer math for a Gaussian channel with two-level Bernoulli block
// fading, operated in the finite-blocklength (normal approximation) regime.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "aoi/error.hpp"

namespace aoi {

/// Two-level fading profile for both devices. alpha[m] is the probability
/// that device m sees the good SNR in a period.
struct ChannelProfile {
  std::array<double, 2> alpha{0.5, 0.5};
  double gamma_good_db = 0.0;
  double gamma_bad_db = 0.0;

  void validate() const {
    for (std::size_t m = 0; m < 2; ++m) {
      if (!(alpha[m] > 0.0 && alpha[m] < 1.0))
        detail::fail_arg("alpha[" + std::to_string(m) + "] must lie in (0,1), got " +
                         std::to_string(alpha[m]));
    }
    if (!std::isfinite(gamma_good_db) || !std::isfinite(gamma_bad_db))
      detail::fail_arg("SNR values must be finite");
    if (!(gamma_good_db > gamma_bad_db))
      detail::fail_arg("good SNR must exceed bad SNR");
  }
};

/// Shared blocklength budget per period and payload size. Bandwidth is
/// normalized to 1 Hz, so capacity is in bits per channel use.
struct LinkParams {
  std::int64_t blocklength_total = 1;  // N
  std::int64_t payload_bits = 1;       // d
  double bandwidth = 1.0;

  void validate() const {
    if (blocklength_total < 1) detail::fail_arg("blocklength N must be >= 1");
    if (payload_bits < 1) detail::fail_arg("payload d must be >= 1");
    if (bandwidth != 1.0) detail::fail_arg("bandwidth is normalized and must equal 1");
  }
};

inline double db_to_linear(double snr_db) noexcept {
  return std::pow(10.0, snr_db / 10.0);
}

/// Gaussian tail probability, Q(x) = erfc(x / sqrt 2) / 2.
inline double q_function(double x) noexcept {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// V = 1 - (1 + gamma)^-2
inline double channel_dispersion(double gamma) noexcept {
  const double r = 1.0 / (1.0 + gamma);
  return 1.0 - r * r;
}

inline double shannon_capacity(double gamma, double bandwidth = 1.0) noexcept {
  return bandwidth * std::log2(1.0 + gamma);
}

/// Block error probability of `d` bits sent over `n` channel uses at linear
/// SNR `gamma`. Zero channel uses fail with certainty.
inline double block_error_rate(std::int64_t n, std::int64_t d, double gamma) {
  if (n < 0) detail::fail_arg("blocklength must be non-negative");
  if (d < 1) detail::fail_arg("payload must be >= 1 bit");
  if (!(gamma > 0.0)) detail::fail_arg("block_error_rate requires gamma > 0");
  if (n == 0) return 1.0;

  const double nn = static_cast<double>(n);
  const double v = channel_dispersion(gamma);
  const double c = shannon_capacity(gamma);
  const double arg = std::sqrt(nn / v) * (c - static_cast<double>(d) / nn) * std::numbers::ln2;
  return q_function(arg);
}

/// Error rates for every blocklength 0..N at both SNR levels. Entries are
/// bit-identical to block_error_rate(); this only avoids recomputing erfc in
/// inner loops.
class ErrorRateTable {
public:
  ErrorRateTable() = default;

  ErrorRateTable(const ChannelProfile& profile, const LinkParams& link)
      : n_total_(link.blocklength_total) {
    const double g[2] = {db_to_linear(profile.gamma_bad_db), db_to_linear(profile.gamma_good_db)};
    for (int bit = 0; bit < 2; ++bit) {
      auto& row = eps_[bit];
      row.resize(static_cast<std::size_t>(n_total_) + 1);
      for (std::int64_t n = 0; n <= n_total_; ++n)
        row[static_cast<std::size_t>(n)] = block_error_rate(n, link.payload_bits, g[bit]);
    }
  }

  /// Error rate with `n` channel uses when the channel bit is `good`.
  double operator()(std::int64_t n, bool good) const {
    return eps_[good ? 1 : 0][static_cast<std::size_t>(n)];
  }

  std::int64_t blocklength_total() const noexcept { return n_total_; }

private:
  std::int64_t n_total_ = 0;
  std::array<std::vector<double>, 2> eps_;
};

}  // namespace aoi
