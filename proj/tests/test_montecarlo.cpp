#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aoi/burstiness.hpp"
#include "aoi/montecarlo.hpp"
#include "aoi/policy_opt.hpp"
#include "test_support.hpp"

using aoi::testing::make_config;
using aoi::testing::scenario_b;

TEST(MeasureBursts, Examples) {
  const auto a = aoi::measure_bursts(std::vector<bool>{false, true, true, false, false, false, true});
  EXPECT_EQ(a.bursts, (std::vector<std::int64_t>{2}));
  EXPECT_EQ(a.iois, (std::vector<std::int64_t>{3}));

  const auto b = aoi::measure_bursts(std::vector<bool>(10, false));
  EXPECT_TRUE(b.bursts.empty());
  EXPECT_TRUE(b.iois.empty());

  const auto c = aoi::measure_bursts(std::vector<int>{0, 1, 0, 1, 0});
  EXPECT_EQ(c.bursts, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(c.iois, (std::vector<std::int64_t>{1}));

  EXPECT_TRUE(aoi::measure_bursts(std::vector<bool>{}).bursts.empty());
  EXPECT_FALSE(aoi::mean_of({}).has_value());
  EXPECT_DOUBLE_EQ(*aoi::mean_of({1, 2, 4}), 7.0 / 3.0);
}

TEST(Rng, SplitSeedAndUniformContract) {
  EXPECT_NE(aoi::split_seed(1, 0), aoi::split_seed(1, 1));
  EXPECT_NE(aoi::split_seed(1, 0), aoi::split_seed(2, 0));
  std::mt19937_64 ref(42);
  aoi::Rng rng(42);
  for (int k = 0; k < 100; ++k) {
    const double u = rng.uniform01();
    EXPECT_EQ(u, static_cast<double>(ref() >> 11) * 0x1.0p-53);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  aoi::Rng r2(7);
  for (int k = 0; k < 1000; ++k) EXPECT_LT(r2.below(7), 7u);
}

TEST(Simulator, FollowsDrawOrder) {
  // Replays the per-period draw order with a bare engine.
  const auto cfg = make_config(0.6, 0.4, 4, 2, 200);
  const aoi::ChainModel model(cfg);
  aoi::Rng prng(3);
  const auto policy = aoi::random_policy(cfg, prng);
  aoi::Simulator sim(model, policy, 1234);
  std::mt19937_64 ref(1234);
  auto u = [&] { return static_cast<double>(ref() >> 11) * 0x1.0p-53; };
  aoi::SystemState s = cfg.initial_state;
  const double g[2] = {aoi::db_to_linear(cfg.profile.gamma_bad_db), aoi::db_to_linear(cfg.profile.gamma_good_db)};
  for (int k = 0; k < 500; ++k) {
    const auto lam = policy[aoi::state_ordinal(s, cfg.a_max)];
    const bool f1 = u() < aoi::block_error_rate(lam, 16, g[s.x1]);
    const bool f2 = u() < aoi::block_error_rate(200 - lam, 16, g[s.x2]);
    const int x1 = u() < cfg.profile.alpha[0];
    const int x2 = u() < cfg.profile.alpha[1];
    s = {f1 ? std::min(s.a1 + 1, cfg.a_max) : 1, f2 ? std::min(s.a2 + 1, cfg.a_max) : 1, x1, x2};
    const bool out = sim.step();
    ASSERT_EQ(sim.state(), s) << "period " << k;
    ASSERT_EQ(out, aoi::is_outage(s, cfg.a_out));
  }
}

TEST(Simulate, DeterministicPerSeed) {
  const auto cfg = scenario_b();
  const auto p = aoi::naive_policy(cfg);
  const auto a = aoi::simulate(cfg, p, 3000, 99);
  const auto b = aoi::simulate(cfg, p, 3000, 99);
  EXPECT_TRUE(a == b);
  const auto c = aoi::simulate(cfg, p, 3000, 100);
  EXPECT_NE(a.outage_sequence, c.outage_sequence);
}

TEST(Simulate, ZeroAllocationStarvesDeviceOne) {
  const auto cfg = scenario_b();
  const aoi::Policy p{std::vector<std::int64_t>(cfg.num_states(), 0)};
  const auto r = aoi::simulate(cfg, p, 200, 5);
  EXPECT_EQ(r.final_state.a1, cfg.a_max);
  // a1 climbs 1 -> 5 deterministically, outage from period 3 on.
  for (std::size_t k = 0; k < r.outage_sequence.size(); ++k) EXPECT_EQ(r.outage_sequence[k], k >= 2 ? 1 : 0);
  EXPECT_EQ(r.outage_count, 198);
}

TEST(Simulate, StatesStayLegal) {
  const auto cfg = make_config(0.5, 0.5, 3, 2, 60);
  const aoi::ChainModel model(cfg);
  aoi::Rng prng(8);
  const auto policy = aoi::random_policy(cfg, prng);
  aoi::Simulator sim(model, policy, 77);
  for (int k = 0; k < 5000; ++k) {
    const auto before = sim.state();
    sim.step();
    const auto& s = sim.state();
    ASSERT_TRUE(s.valid(cfg.a_max));
    ASSERT_TRUE(s.a1 == 1 || s.a1 == std::min(before.a1 + 1, cfg.a_max));
    ASSERT_TRUE(s.a2 == 1 || s.a2 == std::min(before.a2 + 1, cfg.a_max));
  }
}

TEST(Simulate, RejectsBadInputs) {
  const auto cfg = scenario_b();
  EXPECT_THROW(aoi::simulate(cfg, aoi::naive_policy(cfg), 0, 1), aoi::InvalidArgument);
  EXPECT_THROW(aoi::simulate(cfg, aoi::Policy{{1}}, 10, 1), aoi::InvalidArgument);
}

TEST(Repetitions, SingleRepEqualsSimulate) {
  const auto cfg = scenario_b();
  const auto p = aoi::naive_policy(cfg);
  const auto s = aoi::run_repetitions(cfg, p, 1, 1000, 31);
  ASSERT_EQ(s.runs.size(), 1u);
  EXPECT_TRUE(s.runs[0] == aoi::simulate(cfg, p, 1000, aoi::repetition_seed(31, 0)));
  EXPECT_EQ(s.mean_outage_rate, s.runs[0].outage_rate);
  EXPECT_EQ(s.stderr_outage_rate, 0.0);
}

TEST(Repetitions, AggregationIgnoresRunOrder) {
  const auto cfg = scenario_b();
  const auto p = aoi::naive_policy(cfg);
  const auto s = aoi::run_repetitions(cfg, p, 8, 1500, 4);
  auto shuffled = s.runs;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[1], shuffled[5]);
  const auto t = aoi::aggregate_runs(shuffled, std::nullopt);
  EXPECT_EQ(t.mean_outage_rate, s.mean_outage_rate);
  EXPECT_EQ(t.stddev_outage_rate, s.stddev_outage_rate);
  EXPECT_EQ(t.pooled_bursts, s.pooled_bursts);
  EXPECT_EQ(t.mean_ioi, s.mean_ioi);
}

TEST(Repetitions, EmpiricalOutageAgreesWithStationaryValue) {
  const auto cfg = make_config(0.6, 0.4, 5, 2);
  const auto p = aoi::naive_policy(cfg);
  const auto b = aoi::burst_stats(cfg, p);
  const auto s = aoi::run_repetitions(cfg, p, 10, 100000, 2718, aoi::AnalyticPrediction{b.p_out, b.mean_outage_duration, b.mean_ioi});
  ASSERT_GT(s.stderr_outage_rate, 0.0);
  EXPECT_LT(std::abs(s.mean_outage_rate - b.p_out), 3 * s.stderr_outage_rate);
  ASSERT_TRUE(s.error_mean_burst.has_value());
  EXPECT_LT(*s.error_mean_burst, 0.01);
  EXPECT_LT(*s.error_mean_ioi, 0.01);
}

TEST(NormalizedError, Definition) {
  EXPECT_DOUBLE_EQ(*aoi::normalized_error_power(2.0, 1.0), 0.25);
  EXPECT_EQ(*aoi::normalized_error_power(3.0, 3.0), 0.0);
  EXPECT_FALSE(aoi::normalized_error_power(std::nullopt, 1.0).has_value());
  EXPECT_FALSE(aoi::normalized_error_power(0.0, 1.0).has_value());
}
