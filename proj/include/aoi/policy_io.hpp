#pragma once

// Policy files. A policy is written with explicit 1-based state indices:
//
//   {"a_max": 5, "N": 1000,
//    "entries": [{"index": 1, "state": [1,1,0,0], "lambda": 500}, ...]}
//
// When reading, the object may also be nested under a "policy" key, or
// appear as "best.policy" in an optimizer report.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoi/error.hpp"
#include "aoi/markov_core.hpp"

namespace aoi {

inline nlohmann::json policy_to_json(const Policy& policy, const SystemConfig& cfg) {
  policy.validate(cfg);
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < policy.size(); ++i) {
    const SystemState s = ordinal_to_state(i, cfg.a_max);
    entries.push_back({{"index", i + 1}, {"state", {s.a1, s.a2, s.x1, s.x2}}, {"lambda", policy[i]}});
  }
  return {{"a_max", cfg.a_max}, {"N", cfg.blocklength()}, {"entries", entries}};
}

inline Policy policy_from_json(const nlohmann::json& doc, const SystemConfig& cfg) {
  const nlohmann::json* node = &doc;
  if (node->is_object() && node->contains("best") && (*node)["best"].is_object() && (*node)["best"].contains("policy"))
    node = &(*node)["best"]["policy"];
  else if (node->is_object() && node->contains("policy"))
    node = &(*node)["policy"];
  if (!node->is_object() || !node->contains("entries") || !(*node)["entries"].is_array())
    detail::fail_arg("policy document needs an 'entries' array");
  if (node->contains("a_max") && (*node)["a_max"] != cfg.a_max)
    detail::fail_arg("policy was written for a different a_max");

  Policy p;
  p.lambda.assign(cfg.num_states(), -1);
  for (const auto& e : (*node)["entries"]) {
    if (!e.is_object() || !e.contains("index") || !e.contains("lambda") || !e["index"].is_number_integer() ||
        !e["lambda"].is_number_integer())
      detail::fail_arg("each policy entry needs integer 'index' and 'lambda'");
    const auto index = e["index"].get<long long>();
    if (index < 1 || static_cast<std::size_t>(index) > cfg.num_states())
      detail::fail_arg("policy entry index " + std::to_string(index) + " out of range");
    auto& slot = p.lambda[static_cast<std::size_t>(index - 1)];
    if (slot != -1) detail::fail_arg("duplicate policy entry for index " + std::to_string(index));
    const auto lambda = e["lambda"].get<long long>();
    if (lambda < 0 || lambda > cfg.blocklength())
      detail::fail_arg("policy entry index " + std::to_string(index) + " has lambda " + std::to_string(lambda) +
                       " outside [0, " + std::to_string(cfg.blocklength()) + "]");
    slot = lambda;
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.lambda[i] == -1) detail::fail_arg("policy is missing state index " + std::to_string(i + 1));
  return p;
}

inline Policy load_policy(const std::string& path, const SystemConfig& cfg) {
  std::ifstream in(path);
  if (!in) detail::fail_arg("cannot open policy file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail_arg("policy file is not valid JSON: " + std::string(e.what()));
  }
  return policy_from_json(doc, cfg);
}

}  // namespace aoi
