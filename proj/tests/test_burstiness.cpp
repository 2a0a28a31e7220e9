#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "aoi/burstiness.hpp"
#include "aoi/policy_opt.hpp"
#include "aoi/random.hpp"
#include "test_support.hpp"

using aoi::testing::scenario_b;

namespace {

aoi::TransitionMatrix random_chain(aoi::Rng& rng, int n) {
  aoi::TransitionMatrix t{Eigen::MatrixXd(n, n)};
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += t.p(i, j) = 0.05 + rng.uniform01();
    t.p.row(i) /= s;
  }
  return t;
}

// xi_ij(k) by explicit enumeration of every path with outage interior.
double xi_paths(const aoi::TransitionMatrix& t, const std::vector<bool>& out, int i, int j, int k) {
  const int n = static_cast<int>(t.size());
  std::function<double(int, int)> walk = [&](int at, int left) -> double {
    if (left == 1) return t.p(at, j);
    double acc = 0.0;
    for (int l = 0; l < n; ++l)
      if (out[static_cast<std::size_t>(l)]) acc += t.p(at, l) * walk(l, left - 1);
    return acc;
  };
  return walk(i, k);
}

double xi_set_paths(const aoi::TransitionMatrix& t, const aoi::SteadyState& ss, const std::vector<bool>& out,
                    bool from, bool to, int k) {
  double acc = 0.0;
  for (int i = 0; i < t.size(); ++i)
    for (int j = 0; j < t.size(); ++j)
      if (out[static_cast<std::size_t>(i)] == from && out[static_cast<std::size_t>(j)] == to)
        acc += ss[i] * xi_paths(t, out, i, j, k);
  return acc;
}

aoi::TransitionMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  aoi::TransitionMatrix t{Eigen::MatrixXd(n, n)};
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) t.p(i, j++) = v;
    ++i;
  }
  return t;
}

}  // namespace

TEST(XiMatrix, FirstStepIsTransitionMatrix) {
  aoi::Rng rng(1);
  const auto t = random_chain(rng, 4);
  EXPECT_EQ(aoi::xi_matrix(t, {false, true, true, false}, 1), t.p);
}

TEST(XiMatrix, EmptyOutageSetKillsLongerPaths) {
  aoi::Rng rng(2);
  const auto t = random_chain(rng, 4);
  EXPECT_EQ(aoi::xi_matrix(t, {false, false, false, false}, 2), Eigen::MatrixXd::Zero(4, 4));
}

TEST(XiMatrix, MatchesPathEnumeration) {
  aoi::Rng rng(3);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto t = random_chain(rng, n);
      std::vector<bool> out(static_cast<std::size_t>(n));
      for (auto&& b : out) b = rng.bernoulli(0.5);
      for (int k = 1; k <= 4; ++k) {
        const auto xi = aoi::xi_matrix(t, out, k);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) EXPECT_NEAR(xi(i, j), xi_paths(t, out, i, j, k), 1e-14);
      }
    }
  }
}

TEST(XiSetToSet, MatchesPathEnumerationAndSumsToOne) {
  aoi::Rng rng(4);
  for (int n = 3; n <= 5; ++n) {
    const auto t = random_chain(rng, n);
    const auto ss = aoi::steady_state(t);
    std::vector<bool> out(static_cast<std::size_t>(n), false);
    out[1] = out[static_cast<std::size_t>(n) - 1] = true;
    double total = 0.0;
    for (bool from : {false, true})
      for (bool to : {false, true}) {
        total += aoi::xi_set_to_set(ss, t, out, from, to, 1);
        for (int k = 1; k <= 4; ++k)
          EXPECT_NEAR(aoi::xi_set_to_set(ss, t, out, from, to, k), xi_set_paths(t, ss, out, from, to, k), 1e-14);
      }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(XiSetToSet, ResToOutAtOneStepIsUnrolledDefinition) {
  const auto cfg = scenario_b();
  const auto t = aoi::build_transition_matrix(cfg, aoi::naive_policy(cfg));
  const auto ss = aoi::steady_state(t);
  const auto out = aoi::outage_mask(cfg.a_max, cfg.a_out);
  double want = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j)
      if (!out[i] && out[j]) want += ss[static_cast<Eigen::Index>(i)] * t.p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  EXPECT_NEAR(aoi::xi_set_to_set(ss, t, false, true, 1, cfg), want, 1e-16);
}

TEST(OutageDuration, SinglePeriodOutagesWhenOutageCannotRepeat) {
  // State 2 is the only outage state and always returns to residual states.
  const auto t = matrix({{0.5, 0.3, 0.2}, {0.4, 0.0, 0.6}, {0.1, 0.5, 0.4}});
  const std::vector<bool> out{false, true, false};
  const auto ss = aoi::steady_state(t);
  const auto pmf = aoi::outage_duration_pmf(ss, t, out, 5);
  EXPECT_NEAR(pmf[0], 1.0, 1e-15);
  for (std::size_t d = 1; d < pmf.size(); ++d) EXPECT_EQ(pmf[d], 0.0);
  EXPECT_EQ(aoi::mean_outage_duration(ss, t, out), 1.0);
}

TEST(OutageDuration, GeometricTwoStateChain) {
  const double r = 0.2, q = 0.5;
  const auto t = matrix({{1 - r, r}, {1 - q, q}});
  const std::vector<bool> out{false, true};
  const auto ss = aoi::steady_state(t);
  EXPECT_NEAR(aoi::mean_outage_duration(ss, t, out), 2.0, 1e-12);
  EXPECT_NEAR(aoi::mean_ioi(ss, t, out), 1.0 / r, 1e-12);
  const auto pmf = aoi::outage_duration_pmf(ss, t, out, 10);
  for (std::size_t d = 0; d < pmf.size(); ++d) EXPECT_NEAR(pmf[d], std::pow(q, d) * (1 - q), 1e-15);
}

TEST(OutageDuration, UnreachableOutageIsSignalled) {
  // State 3 is transient, so it carries no stationary mass and is never entered.
  const auto t = matrix({{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}});
  const std::vector<bool> out{false, false, true};
  const auto ss = aoi::steady_state(t);
  EXPECT_THROW(aoi::outage_duration_pmf(ss, t, out, 3), aoi::NumericalError);
  EXPECT_THROW(aoi::mean_outage_duration(ss, t, out), aoi::NumericalError);
  EXPECT_THROW(aoi::mean_ioi(ss, t, out), aoi::NumericalError);
  const auto b = aoi::burst_stats(out, t, ss);
  EXPECT_FALSE(b.defined);
}

TEST(OutageDuration, PmfOnPresetIsNormalizedAndConsistentWithMean) {
  const auto cfg = scenario_b();
  const auto b = aoi::burst_stats(cfg, aoi::naive_policy(cfg));
  ASSERT_TRUE(b.defined);
  double mass = 0.0, mean = 0.0;
  for (std::size_t d = 0; d < b.duration_pmf.size(); ++d) {
    EXPECT_GE(b.duration_pmf[d], 0.0);
    mass += b.duration_pmf[d];
    mean += static_cast<double>(d + 1) * b.duration_pmf[d];
  }
  EXPECT_NEAR(mass, 1.0, 1e-9);
  EXPECT_LT(std::abs(b.truncation_residual), 1e-9);
  EXPECT_NEAR(mean, b.mean_outage_duration, 1e-8);
  EXPECT_GE(b.mean_outage_duration, 1.0);
  EXPECT_GE(b.mean_ioi, 1.0);
}

TEST(OutageDuration, TailDecaysAtSpectralRadiusOfOutageBlock) {
  const auto cfg = scenario_b();
  const auto t = aoi::build_transition_matrix(cfg, aoi::naive_policy(cfg));
  const auto ss = aoi::steady_state(t);
  const auto out = aoi::outage_mask(cfg.a_max, cfg.a_out);
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i]) idx.push_back(static_cast<Eigen::Index>(i));
  Eigen::MatrixXd block(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) block(a, b) = t.p(idx[a], idx[b]);
  const double rho = block.eigenvalues().cwiseAbs().maxCoeff();

  const auto pmf = aoi::outage_duration_pmf(ss, t, cfg, 40);
  EXPECT_NEAR(pmf[39] / pmf[38], rho, 1e-6);
}

TEST(BurstStats, IdentityHoldsForRandomPolicies) {
  const auto cfg = scenario_b();
  aoi::Rng rng(77);
  for (int k = 0; k < 20; ++k) {
    const auto b = aoi::burst_stats(cfg, aoi::random_policy(cfg, rng));
    ASSERT_TRUE(b.defined);
    EXPECT_LT(std::abs(b.p_out - b.xi_res_out_1 * b.mean_outage_duration), 1e-9);
  }
}

TEST(BurstStats, EmptyOutageSetIsUndefined) {
  auto cfg = scenario_b();
  cfg.a_out = cfg.a_max;
  const auto b = aoi::burst_stats(cfg, aoi::naive_policy(cfg));
  EXPECT_FALSE(b.defined);
  EXPECT_EQ(b.p_out, 0.0);
  EXPECT_FALSE(b.undefined_reason.empty());
}

TEST(DurationConvention, MapsRunLengths) {
  EXPECT_EQ(aoi::measured_duration(3, aoi::DurationConvention::OutagePeriods), 3);
  EXPECT_EQ(aoi::measured_duration(3, aoi::DurationConvention::RunPlusOne), 4);
}
