#pragma once

// Published AoI outage rates (percent) for the three preset scenarios,
// measured there with 100 Monte-Carlo repetitions of 2500 periods each.
// Used only as a comparison column; nothing is computed from them.

#include <optional>
#include <string_view>

namespace aoi {

struct ReferenceOutage {
  std::string_view policy;  // benchmark name or penalty name
  double percent[3];        // scenario_a, scenario_b, scenario_c
};

inline constexpr ReferenceOutage kTable2Reference[] = {
    {"binary", {0.91, 3.31, 1.37}},
    {"sum-aoi", {0.28, 2.08, 1.32}},
    {"peak-aoi", {0.29, 1.68, 1.25}},
    {"exp-peak-aoi", {0.25, 1.39, 1.20}},
    {"naive", {0.73, 3.25, 3.94}},
    {"min-error", {0.26, 1.65, 1.21}},
};

/// Reference outage probability (as a fraction) for a policy name and a
/// preset scenario name.
inline std::optional<double> reference_outage(std::string_view policy, std::string_view scenario) {
  int col = -1;
  if (scenario == "scenario_a") col = 0;
  if (scenario == "scenario_b") col = 1;
  if (scenario == "scenario_c") col = 2;
  if (col < 0) return std::nullopt;
  for (const auto& r : kTable2Reference)
    if (r.policy == policy) return r.percent[col] / 100.0;
  return std::nullopt;
}

}  // namespace aoi
