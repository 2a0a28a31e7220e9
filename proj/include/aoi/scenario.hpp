#pragma once

// Scenario files: JSON documents describing one experiment.
//
//   {
//     "version": 1,                       optional, must be 1 if present
//     "name": "scenario_b",               optional
//     "alpha": [0.6, 0.4],
//     "snr_db": {"good": -12.2, "bad": -15.2},
//     "blocklength": {"N": 1000, "d": 16},
//     "state": {"a_max": 5, "a_out": 3, "initial": [1, 1, 0, 0]},
//     "optimizer": {"epsilon_cvg": 1e-5, "max_iter": 200, "seeds": 10},
//     "simulation": {"reps": 100, "periods": 2500, "master_seed": 20220101}
//   }
//
// Every section is required and unknown keys are rejected.

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aoi/error.hpp"
#include "aoi/state_space.hpp"

namespace aoi {

inline constexpr int kScenarioSchemaVersion = 1;

struct OptimizerSettings {
  int max_iter = 200;
  int seeds = 10;
};

struct SimulationSettings {
  std::int64_t reps = 100;
  std::int64_t periods = 2500;
  std::uint64_t master_seed = 20220101;
};

struct ScenarioConfig {
  std::string name;
  SystemConfig system;
  OptimizerSettings optimizer;
  SimulationSettings simulation;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) fail_arg("unknown key '" + std::string(where) + it.key() + "'");
  }
}

inline const json& require(const json& obj, std::string_view where, const char* key) {
  if (!obj.is_object()) fail_arg("'" + std::string(where) + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail_arg("missing key '" + std::string(where) + key + "'");
  return *it;
}

template <typename T>
T read_number(const json& obj, std::string_view where, const char* key) {
  const json& v = require(obj, where, key);
  const std::string path = std::string(where) + key;
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail_arg("key '" + path + "' must be a number");
  } else {
    if (!v.is_number_integer()) fail_arg("key '" + path + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_integer() && !v.is_number_unsigned()) fail_arg("key '" + path + "' must be non-negative");
    }
  }
  return v.get<T>();
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  using detail::read_number;
  using detail::require;
  if (!doc.is_object()) detail::fail_arg("scenario document must be a JSON object");
  detail::reject_unknown(doc, "", {"version", "name", "alpha", "snr_db", "blocklength", "state", "optimizer",
                                   "simulation"});
  ScenarioConfig sc;
  if (auto it = doc.find("version"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<int>() != kScenarioSchemaVersion)
      detail::fail_arg("key 'version' must be " + std::to_string(kScenarioSchemaVersion));
  }
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) detail::fail_arg("key 'name' must be a string");
    sc.name = it->get<std::string>();
  }

  const auto& alpha = require(doc, "", "alpha");
  if (!alpha.is_array() || alpha.size() != 2 || !alpha[0].is_number() || !alpha[1].is_number())
    detail::fail_arg("key 'alpha' must be an array of two numbers");
  sc.system.profile.alpha = {alpha[0].get<double>(), alpha[1].get<double>()};

  const auto& snr = require(doc, "", "snr_db");
  detail::reject_unknown(snr, "snr_db.", {"good", "bad"});
  sc.system.profile.gamma_good_db = read_number<double>(snr, "snr_db.", "good");
  sc.system.profile.gamma_bad_db = read_number<double>(snr, "snr_db.", "bad");

  const auto& bl = require(doc, "", "blocklength");
  detail::reject_unknown(bl, "blocklength.", {"N", "d"});
  sc.system.link.blocklength_total = read_number<std::int64_t>(bl, "blocklength.", "N");
  sc.system.link.payload_bits = read_number<std::int64_t>(bl, "blocklength.", "d");

  const auto& st = require(doc, "", "state");
  detail::reject_unknown(st, "state.", {"a_max", "a_out", "initial"});
  sc.system.a_max = read_number<int>(st, "state.", "a_max");
  sc.system.a_out = read_number<int>(st, "state.", "a_out");
  const auto& init = require(st, "state.", "initial");
  if (!init.is_array() || init.size() != 4) detail::fail_arg("key 'state.initial' must be an array of four integers");
  for (const auto& v : init)
    if (!v.is_number_integer()) detail::fail_arg("key 'state.initial' must be an array of four integers");
  sc.system.initial_state = {init[0].get<int>(), init[1].get<int>(), init[2].get<int>(), init[3].get<int>()};

  const auto& opt = require(doc, "", "optimizer");
  detail::reject_unknown(opt, "optimizer.", {"epsilon_cvg", "max_iter", "seeds"});
  sc.system.epsilon_cvg = read_number<double>(opt, "optimizer.", "epsilon_cvg");
  sc.optimizer.max_iter = read_number<int>(opt, "optimizer.", "max_iter");
  sc.optimizer.seeds = read_number<int>(opt, "optimizer.", "seeds");
  if (sc.optimizer.max_iter < 1) detail::fail_arg("key 'optimizer.max_iter' must be >= 1");
  if (sc.optimizer.seeds < 1) detail::fail_arg("key 'optimizer.seeds' must be >= 1");

  const auto& sim = require(doc, "", "simulation");
  detail::reject_unknown(sim, "simulation.", {"reps", "periods", "master_seed"});
  sc.simulation.reps = read_number<std::int64_t>(sim, "simulation.", "reps");
  sc.simulation.periods = read_number<std::int64_t>(sim, "simulation.", "periods");
  sc.simulation.master_seed = read_number<std::uint64_t>(sim, "simulation.", "master_seed");
  if (sc.simulation.reps < 1) detail::fail_arg("key 'simulation.reps' must be >= 1");
  if (sc.simulation.periods < 1) detail::fail_arg("key 'simulation.periods' must be >= 1");

  sc.system.validate();
  return sc;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& sc) {
  const auto& s = sc.system;
  nlohmann::json doc;
  doc["version"] = kScenarioSchemaVersion;
  if (!sc.name.empty()) doc["name"] = sc.name;
  doc["alpha"] = {s.profile.alpha[0], s.profile.alpha[1]};
  doc["snr_db"] = {{"good", s.profile.gamma_good_db}, {"bad", s.profile.gamma_bad_db}};
  doc["blocklength"] = {{"N", s.link.blocklength_total}, {"d", s.link.payload_bits}};
  doc["state"] = {{"a_max", s.a_max},
                  {"a_out", s.a_out},
                  {"initial", {s.initial_state.a1, s.initial_state.a2, s.initial_state.x1, s.initial_state.x2}}};
  doc["optimizer"] = {{"epsilon_cvg", s.epsilon_cvg}, {"max_iter", sc.optimizer.max_iter}, {"seeds", sc.optimizer.seeds}};
  doc["simulation"] = {
      {"reps", sc.simulation.reps}, {"periods", sc.simulation.periods}, {"master_seed", sc.simulation.master_seed}};
  return doc;
}

inline ScenarioConfig parse_scenario(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::fail_arg(std::string("scenario is not valid JSON: ") + e.what());
  }
  return scenario_from_json(doc);
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::fail_arg("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

/// 64-bit FNV-1a over the canonical JSON serialization.
inline std::uint64_t config_hash(const ScenarioConfig& sc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : scenario_to_json(sc).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Presets: two-level fading at -12.2 / -15.2 dB, N = 1000 symbols shared per
// period, d = 16 bit payloads, AoI truncated at 5 with outage above 3.
inline ScenarioConfig make_preset(std::string_view name) {
  ScenarioConfig sc;
  sc.name = std::string(name);
  auto& s = sc.system;
  if (name == "scenario_a") {
    s.profile.alpha = {0.9, 0.7};  // mild fading on both links
  } else if (name == "scenario_b") {
    s.profile.alpha = {0.6, 0.4};  // heavy fading on both links
  } else if (name == "scenario_c") {
    s.profile.alpha = {0.9, 0.2};  // one good link, one poor link
  } else {
    detail::fail_arg("unknown preset '" + std::string(name) + "' (expected scenario_a, scenario_b or scenario_c)");
  }
  s.profile.gamma_good_db = -12.2;
  s.profile.gamma_bad_db = -15.2;
  s.link.blocklength_total = 1000;
  s.link.payload_bits = 16;
  s.a_max = 5;
  s.a_out = 3;
  s.epsilon_cvg = 1e-5;
  s.initial_state = {1, 1, 0, 0};
  return sc;
}

inline constexpr std::string_view kPresetNames[] = {"scenario_a", "scenario_b", "scenario_c"};

}  // namespace aoi
