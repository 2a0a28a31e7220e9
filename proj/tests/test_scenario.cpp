#include <string>

#include <gtest/gtest.h>

#include "aoi/policy_io.hpp"
#include "aoi/policy_opt.hpp"
#include "aoi/scenario.hpp"

using nlohmann::json;

namespace {

json preset_doc(const char* name = "scenario_b") { return aoi::scenario_to_json(aoi::make_preset(name)); }

std::string error_of(const json& doc) {
  try {
    aoi::scenario_from_json(doc);
  } catch (const aoi::InvalidArgument& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Scenario, PresetsRoundTrip) {
  for (auto name : aoi::kPresetNames) {
    const auto sc = aoi::make_preset(name);
    const auto back = aoi::parse_scenario(aoi::scenario_to_json(sc).dump(2));
    EXPECT_EQ(back.name, sc.name);
    EXPECT_EQ(back.system.profile.alpha, sc.system.profile.alpha);
    EXPECT_EQ(back.system.link.blocklength_total, 1000);
    EXPECT_EQ(back.system.a_out, 3);
    EXPECT_EQ(back.simulation.master_seed, 20220101u);
    EXPECT_EQ(aoi::config_hash(back), aoi::config_hash(sc));
  }
  EXPECT_THROW(aoi::make_preset("scenario_d"), aoi::InvalidArgument);
}

TEST(Scenario, HashSeparatesScenarios) {
  EXPECT_NE(aoi::config_hash(aoi::make_preset("scenario_a")), aoi::config_hash(aoi::make_preset("scenario_b")));
  auto sc = aoi::make_preset("scenario_b");
  const auto h = aoi::config_hash(sc);
  sc.simulation.reps = 99;
  EXPECT_NE(aoi::config_hash(sc), h);
}

TEST(Scenario, UnknownKeysAreNamed) {
  auto doc = preset_doc();
  doc["colour"] = 1;
  EXPECT_NE(error_of(doc).find("unknown key 'colour'"), std::string::npos);

  doc = preset_doc();
  doc["state"]["a_in"] = 2;
  EXPECT_NE(error_of(doc).find("unknown key 'state.a_in'"), std::string::npos);
}

TEST(Scenario, MissingKeysAreNamed) {
  auto doc = preset_doc();
  doc.erase("alpha");
  EXPECT_NE(error_of(doc).find("missing key 'alpha'"), std::string::npos);

  doc = preset_doc();
  doc["blocklength"].erase("d");
  EXPECT_NE(error_of(doc).find("missing key 'blocklength.d'"), std::string::npos);
}

TEST(Scenario, RejectsBadValues) {
  auto doc = preset_doc();
  doc["state"]["a_out"] = 6;
  EXPECT_FALSE(error_of(doc).empty());
  doc = preset_doc();
  doc["alpha"] = {0.5, 1.5};
  EXPECT_FALSE(error_of(doc).empty());
  doc = preset_doc();
  doc["version"] = 2;
  EXPECT_NE(error_of(doc).find("version"), std::string::npos);
  doc = preset_doc();
  doc["blocklength"]["N"] = 10.5;
  EXPECT_NE(error_of(doc).find("blocklength.N"), std::string::npos);
  doc = preset_doc();
  doc["simulation"]["master_seed"] = -1;
  EXPECT_FALSE(error_of(doc).empty());
  EXPECT_THROW(aoi::parse_scenario("{not json"), aoi::InvalidArgument);
  EXPECT_THROW(aoi::load_scenario("/nonexistent/file.json"), aoi::InvalidArgument);
}

TEST(PolicyIo, RoundTripAndWrappers) {
  const auto cfg = aoi::make_preset("scenario_c").system;
  aoi::Rng rng(12);
  const auto p = aoi::random_policy(cfg, rng);
  const auto doc = aoi::policy_to_json(p, cfg);
  EXPECT_EQ(aoi::policy_from_json(doc, cfg), p);
  EXPECT_EQ(aoi::policy_from_json(json{{"policy", doc}}, cfg), p);
  EXPECT_EQ(aoi::policy_from_json(json{{"best", {{"policy", doc}}}}, cfg), p);
}

TEST(PolicyIo, RejectsMalformedPolicies) {
  const auto cfg = aoi::make_preset("scenario_b").system;
  const auto good = aoi::policy_to_json(aoi::naive_policy(cfg), cfg);

  auto bad = good;
  bad["entries"][3]["lambda"] = 1001;
  EXPECT_THROW(aoi::policy_from_json(bad, cfg), aoi::InvalidArgument);
  bad = good;
  bad["entries"][3]["index"] = 5;
  EXPECT_THROW(aoi::policy_from_json(bad, cfg), aoi::InvalidArgument);
  bad = good;
  bad["entries"].erase(bad["entries"].begin());
  EXPECT_THROW(aoi::policy_from_json(bad, cfg), aoi::InvalidArgument);
  bad = good;
  bad["a_max"] = 4;
  EXPECT_THROW(aoi::policy_from_json(bad, cfg), aoi::InvalidArgument);
  EXPECT_THROW(aoi::policy_from_json(json::array(), cfg), aoi::InvalidArgument);
}
