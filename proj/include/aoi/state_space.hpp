#pragma once

// Truncated state space of the two-device system: AoI of each device in
// {1..A_max} and one channel bit per device, 4*A_max^2 states in total.
// Public indices are 1-based; the `ordinal` helpers are the 0-based
// equivalents used for array access.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aoi/error.hpp"
#include "aoi/fbl_phy.hpp"

namespace aoi {

struct SystemState {
  int a1 = 1;
  int a2 = 1;
  int x1 = 0;
  int x2 = 0;

  friend bool operator==(const SystemState&, const SystemState&) = default;

  bool valid(int a_max) const noexcept {
    return a1 >= 1 && a1 <= a_max && a2 >= 1 && a2 <= a_max && (x1 == 0 || x1 == 1) &&
           (x2 == 0 || x2 == 1);
  }

  std::string to_string() const {
    return "(" + std::to_string(a1) + "," + std::to_string(a2) + "," + std::to_string(x1) + "," +
           std::to_string(x2) + ")";
  }
};

inline std::size_t state_count(int a_max) noexcept {
  return 4u * static_cast<std::size_t>(a_max) * static_cast<std::size_t>(a_max);
}

/// i = 2*{2*[(a1-1)*A_max + a2 - 1] + x1} + x2 + 1
inline std::size_t state_to_index(const SystemState& s, int a_max) {
  if (a_max < 1) detail::fail_arg("a_max must be >= 1");
  if (!s.valid(a_max))
    detail::fail_arg("state " + s.to_string() + " is invalid for a_max=" + std::to_string(a_max));
  const auto am = static_cast<std::size_t>(a_max);
  const std::size_t aoi_pair = static_cast<std::size_t>(s.a1 - 1) * am + static_cast<std::size_t>(s.a2 - 1);
  return 2 * (2 * aoi_pair + static_cast<std::size_t>(s.x1)) + static_cast<std::size_t>(s.x2) + 1;
}

inline SystemState index_to_state(std::size_t index, int a_max) {
  if (a_max < 1) detail::fail_arg("a_max must be >= 1");
  if (index < 1 || index > state_count(a_max))
    detail::fail_arg("state index " + std::to_string(index) + " out of range for a_max=" +
                     std::to_string(a_max));
  const std::size_t k = index - 1;
  const auto am = static_cast<std::size_t>(a_max);
  const std::size_t aoi_pair = k / 4;
  SystemState s;
  s.x2 = static_cast<int>(k % 2);
  s.x1 = static_cast<int>((k / 2) % 2);
  s.a2 = static_cast<int>(aoi_pair % am) + 1;
  s.a1 = static_cast<int>(aoi_pair / am) + 1;
  return s;
}

inline std::size_t state_ordinal(const SystemState& s, int a_max) { return state_to_index(s, a_max) - 1; }

inline SystemState ordinal_to_state(std::size_t ordinal, int a_max) {
  return index_to_state(ordinal + 1, a_max);
}

/// Outage iff some device's AoI strictly exceeds the threshold.
inline bool is_outage(const SystemState& s, int a_out) noexcept { return s.a1 > a_out || s.a2 > a_out; }

inline std::vector<SystemState> enumerate_states(int a_max) {
  if (a_max < 1) detail::fail_arg("a_max must be >= 1");
  std::vector<SystemState> out;
  out.reserve(state_count(a_max));
  for (std::size_t i = 1; i <= state_count(a_max); ++i) out.push_back(index_to_state(i, a_max));
  return out;
}

/// Outage indicator per state, in ordinal order.
inline std::vector<bool> outage_mask(int a_max, int a_out) {
  std::vector<bool> mask;
  mask.reserve(state_count(a_max));
  for (const auto& s : enumerate_states(a_max)) mask.push_back(is_outage(s, a_out));
  return mask;
}

struct SystemConfig {
  ChannelProfile profile;
  LinkParams link;
  int a_max = 5;
  int a_out = 3;
  double epsilon_cvg = 1e-5;
  SystemState initial_state{1, 1, 0, 0};

  std::int64_t blocklength() const noexcept { return link.blocklength_total; }
  std::size_t num_states() const noexcept { return state_count(a_max); }

  void validate() const {
    profile.validate();
    link.validate();
    if (a_max < 1) detail::fail_arg("a_max must be >= 1");
    if (a_out < 1 || a_out > a_max)
      detail::fail_arg("a_out must satisfy 1 <= a_out <= a_max (a_out=" + std::to_string(a_out) +
                       ", a_max=" + std::to_string(a_max) + ")");
    if (!(epsilon_cvg > 0.0)) detail::fail_arg("epsilon_cvg must be > 0");
    if (!initial_state.valid(a_max))
      detail::fail_arg("initial state " + initial_state.to_string() + " invalid for a_max=" +
                       std::to_string(a_max));
  }

  /// Non-fatal remarks about a valid config.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (a_out == a_max) w.push_back("a_out == a_max: the outage set is empty");
    return w;
  }
};

}  // namespace aoi
