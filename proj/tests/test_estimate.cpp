#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bgbm/dists.hpp"
#include "bgbm/errors.hpp"
#include "bgbm/estimate.hpp"
#include "bgbm/rng.hpp"
#include "bgbm/trading.hpp"

using namespace bgbm;

namespace {

const ModelParams kBase{-1.0, 1.0, 1.0, 1.0, 0.1};

// Sequence whose pairs (including the first) are exactly (v[i], u[i]).
TradeSequence from_pairs(const std::vector<double>& v, const std::vector<double>& u) {
  std::vector<double> t(v.size()), p(v.size());
  double tt = 0.0, z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    tt += v[i];
    z += u[i];
    t[i] = tt;
    p[i] = std::exp(z);
  }
  return TradeSequence(t, p);
}

std::array<double, 5> as_array(const ModelParams& p) { return {p.mu_a, p.mu_b, p.sigma_a, p.sigma_b, p.delta}; }

TradeSequence random_pairs(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> v(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = -0.3 * std::log(rng.uniform());
    u[i] = 0.2 * rng.normal() + 0.4 * (v[i] - 0.3) * rng.uniform();
  }
  return from_pairs(v, u);
}

}  // namespace

TEST(SampleMoments, Arithmetic) {
  const SampleMoments m = sample_moments(from_pairs({1.0, 3.0}, {1.0, 2.0}), true);
  EXPECT_DOUBLE_EQ(m.x1, 2.0);
  EXPECT_NEAR(m.x2, 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(m.x3, 5.0);
  EXPECT_NEAR(m.x4, 2.5, 1e-15);
  EXPECT_NEAR(m.x5, 3.5, 1e-15);
  EXPECT_EQ(m.n, 2u);
  EXPECT_TRUE(m.use_first);
}

TEST(SampleMoments, EqualTimesAreDegenerate) {
  EXPECT_THROW(sample_moments(from_pairs({1.0, 1.0}, {2.0, 2.0}), true), DegenerateDataError);
}

TEST(SampleMoments, FirstPairDroppedByDefault) {
  const auto s = from_pairs({5.0, 1.0, 3.0}, {9.0, 1.0, 2.0});
  const SampleMoments m = sample_moments(s);
  EXPECT_EQ(m.n, 2u);
  EXPECT_DOUBLE_EQ(m.x1, 2.0);
  EXPECT_THROW(sample_moments(from_pairs({1.0}, {1.0})), InsufficientDataError);
}

TEST(SampleMoments, CauchySchwarzOnRandomData) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SampleMoments m = sample_moments(random_pairs(seed, 30));
    const double vv = m.x3 - m.x1 * m.x1, uu = m.x4 - m.x2 * m.x2, uv = m.x5 - m.x1 * m.x2;
    EXPECT_GE(vv, 0.0);
    EXPECT_GE(uu, 0.0);
    EXPECT_LE(uv * uv, vv * uu * (1.0 + 1e-12));
  }
}

TEST(Fit, PopulationRoundTrip) {
  const EstimateResult r = fit(population_moments(kBase));
  const auto got = as_array(r.theta_hat), want = as_array(kBase);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(got[j], want[j], 1e-10);
  // The population moments are the closed-form pair moments assembled into raw moments.
  const UVMoments c = closed_form_moments(kBase);
  const SampleMoments m = population_moments(kBase);
  EXPECT_DOUBLE_EQ(m.x1, c.mean_v);
  EXPECT_NEAR(m.x3, c.var_v + c.mean_v * c.mean_v, 1e-15);
  EXPECT_NEAR(m.x5, c.cov_uv + c.mean_u * c.mean_v, 1e-15);
}

TEST(Fit, RandomRoundTrips) {
  Rng rng(2);
  for (int k = 0; k < 200; ++k) {
    ModelParams th;
    th.mu_a = -3.0 + 4.0 * rng.uniform();
    th.mu_b = th.mu_a + 0.05 + 4.0 * rng.uniform();
    th.sigma_a = 0.1 + 2.0 * rng.uniform();
    th.sigma_b = 0.1 + 2.0 * rng.uniform();
    th.delta = 0.001 + rng.uniform();
    const auto got = as_array(fit(population_moments(th)).theta_hat), want = as_array(th);
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(got[j], want[j], 1e-10 * std::max(1.0, std::abs(want[j])));
  }
}

TEST(Fit, WellDefinednessOnArbitraryData) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto terms = well_definedness_terms(sample_moments(random_pairs(seed, 10 + seed % 50)));
    for (double q : terms) EXPECT_GE(q, -1e-12);
  }
}

TEST(Fit, TooFewPairs) {
  EXPECT_THROW(fit(sample_moments(random_pairs(1, 9), true)), InsufficientDataError);
  EXPECT_NO_THROW(fit(sample_moments(random_pairs(1, 11))));
}

TEST(Fit, RecoversSimulatedParameters) {
  const std::size_t n = 20000;
  const auto seq = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), n + 1, 4);
  const EstimateResult r = fit(sample_moments(seq));
  const auto se = asymptotic_stderr(seq, r);
  const auto got = as_array(r.theta_hat), want = as_array(kBase);
  for (int j = 0; j < 5; ++j) {
    EXPECT_GT(se[j], 0.0);
    EXPECT_NEAR(got[j], want[j], 5.0 * se[j]) << "component " << j;
  }
  EXPECT_NEAR(r.coeffs.m, 0.5 * (r.theta_hat.mu_a + r.theta_hat.mu_b), 1e-12);
}

TEST(Stderr, CoverageOfMuB) {
  int covered = 0;
  const int datasets = 500;
  for (int d = 0; d < datasets; ++d) {
    const auto seq = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), 10001, 1000 + d);
    const EstimateResult r = fit(sample_moments(seq));
    const auto se = asymptotic_stderr(seq, r);
    covered += std::abs(r.theta_hat.mu_b - kBase.mu_b) <= 2.0 * se[1];
  }
  const double frac = static_cast<double>(covered) / datasets;
  EXPECT_GE(frac, 0.93);
  EXPECT_LE(frac, 0.98);
}

TEST(Stderr, ScalesAsInverseRootN) {
  const auto small = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), 10001, 77);
  const auto large = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), 40001, 78);
  const auto se_s = asymptotic_stderr(small, fit(sample_moments(small)));
  const auto se_l = asymptotic_stderr(large, fit(sample_moments(large)));
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(se_s[j] / se_l[j], 2.0, 0.3) << "component " << j;
}

TEST(Stderr, DeterministicDataRejected) {
  std::vector<double> v, u;
  for (int i = 0; i < 200; ++i) {
    v.push_back(1.0 + (i % 3));
    u.push_back(0.5 * v.back());
  }
  const auto seq = from_pairs(v, u);
  EXPECT_THROW(asymptotic_stderr(seq, EstimateResult{}), DegenerateDataError);
}

TEST(Stderr, NeedsEnoughPairs) {
  const auto seq = random_pairs(3, 50);
  EXPECT_THROW(asymptotic_stderr(seq, fit(sample_moments(seq))), InsufficientDataError);
}

TEST(FitJson, Fields) {
  const EstimateResult r = fit(population_moments(kBase));
  const auto j = to_json(r, FitWindow{10.0, 70.0});
  for (const char* k : {"mu_a", "mu_b", "sigma_a", "sigma_b", "delta", "m", "s", "stderr", "n", "window"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_TRUE(j["stderr"].is_null());
  EXPECT_DOUBLE_EQ(j["window"]["start_s"].get<double>(), 10.0);
  EXPECT_TRUE(to_json(r)["window"].is_null());
}
