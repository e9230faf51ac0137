#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <tuple>
#include <vector>

#include "bgbm/dists.hpp"
#include "bgbm/errors.hpp"
#include "bgbm/numeric.hpp"
#include "bgbm/trading.hpp"

using namespace bgbm;

namespace {

const ModelParams kBase{-1.0, 1.0, 1.0, 1.0, 0.1};

TradeSequence from_increments(const std::vector<double>& t, const std::vector<double>& u) {
  std::vector<double> p(u.size());
  double z = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    z += u[i];
    p[i] = std::exp(z);
  }
  return TradeSequence(t, p);
}

}  // namespace

TEST(DetectTrades, DriftOnlyUnitSpacing) {
  // x_a - x_b = 2 - 2t on a grid of step 0.5, delta = 1.
  std::vector<double> diff;
  for (int i = 0; i <= 8; ++i) diff.push_back(2.0 - 2.0 * 0.5 * i);
  const auto trades = detect_trades(diff, 1.0);
  ASSERT_EQ(trades.size(), 4u);
  for (std::size_t k = 0; k < trades.size(); ++k) {
    EXPECT_EQ(trades[k].index, 2 * (k + 1));  // t = k + 1
    EXPECT_EQ(trades[k].n, k + 1);
  }
}

TEST(DetectTrades, NoCrossingNoTrades) {
  EXPECT_TRUE(detect_trades(std::vector<double>{1.0, 0.5, 0.2, 0.7}, 0.1).empty());
}

TEST(DetectTrades, OneStepCanCarrySeveralTrades) {
  const auto trades = detect_trades(std::vector<double>{0.5, -0.45}, 0.1);
  ASSERT_EQ(trades.size(), 3u);
  for (const auto& d : trades) EXPECT_EQ(d.index, 1u);
}

TEST(ModifiedPaths, DriftOnlyTradeRatio) {
  const ModelParams p{-1.0, 1.0, 0.0, 0.0, 1.0};
  const BouncingPath path = build_bouncing_path(p, std::exp(1.0), std::exp(-1.0), TimeGrid::uniform(0.5, 8), 1);
  const ModifiedPath mp = build_modified_paths(path, p);
  ASSERT_EQ(mp.trades.size(), 4u);
  for (std::size_t i = 0; i < mp.trades.front().index; ++i) {
    EXPECT_DOUBLE_EQ(mp.a_delta[i], path.a[i]);
    EXPECT_DOUBLE_EQ(mp.b_delta[i], path.b[i]);
  }
  for (const auto& d : mp.trades) {
    EXPECT_NEAR(mp.a_delta[d.index] / mp.b_delta[d.index], std::exp(2.0), 1e-12);
  }
  const TradeSequence seq = grid_trade_sequence(mp);
  EXPECT_EQ(seq.t(), (std::vector<double>{1.0, 2.0, 3.0, 4.0}));
}

TEST(ModifiedPaths, BracketTheReflectedQuotes) {
  const ModelParams p{-1.0, 1.0, 1.0, 1.3, 0.05};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BouncingPath path = build_bouncing_path(p, std::exp(0.05), std::exp(-0.05), TimeGrid::uniform(1e-4, 5000), seed);
    const ModifiedPath mp = build_modified_paths(path, p);
    for (std::size_t i = 0; i < path.a.size(); ++i) {
      ASSERT_GE(mp.a_delta[i], path.a[i]);
      ASSERT_LE(mp.b_delta[i], path.b[i]);
    }
  }
}

TEST(ModifiedPaths, AskOvershootShrinksWithDelta) {
  const ModelParams base{-1.0, 1.0, 1.0, 1.0, 0.1};
  const BouncingPath path = build_bouncing_path(base, 1.0, 1.0, TimeGrid::uniform(1e-5, 100000), 3);
  double prev = 1e300;
  double last = 0.0;
  for (double d : {0.1, 0.01, 0.001}) {
    ModelParams p = base;
    p.delta = d;
    const ModifiedPath mp = build_modified_paths(path, p);
    double sup = 1.0;
    for (std::size_t i = 0; i < path.a.size(); ++i) sup = std::max(sup, mp.a_delta[i] / path.a[i]);
    EXPECT_LT(sup, prev);
    prev = sup;
    last = sup;
  }
  EXPECT_LT(last, std::exp(0.002));
}

TEST(ModifiedPaths, CoincidentTradesMerge) {
  const ModelParams p{-1.0, 1.0, 0.0, 0.0, 0.1};
  // One grid step of 1 closes the log spread by 2, crossing several levels.
  const BouncingPath path = build_bouncing_path(p, std::exp(0.1), std::exp(-0.1), TimeGrid::uniform(1.0, 2), 1);
  const ModifiedPath mp = build_modified_paths(path, p);
  EXPECT_GT(mp.trades.size(), 2u);
  const TradeSequence seq = grid_trade_sequence(mp);
  EXPECT_EQ(seq.size(), 2u);
  EXPECT_DOUBLE_EQ(seq.p().back(), mp.trade_prices.back());
}

TEST(TradeSequence, DerivedIncrements) {
  const TradeSequence s({0.5, 1.2, 3.0}, {1.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(s.v()[0], 0.5);
  EXPECT_DOUBLE_EQ(s.v()[1], 0.7);
  EXPECT_DOUBLE_EQ(s.u()[0], 0.0);
  EXPECT_DOUBLE_EQ(s.u()[1], std::log(2.0));
  EXPECT_DOUBLE_EQ(s.u()[2], -std::log(2.0));
}

TEST(TradeSequence, RejectsBadInput) {
  EXPECT_THROW(TradeSequence({1.0, 1.0}, {1.0, 1.0}), DomainError);
  EXPECT_THROW(TradeSequence({0.0, 1.0}, {1.0, 1.0}), DomainError);
  EXPECT_THROW(TradeSequence({1.0, 2.0}, {1.0, -1.0}), DomainError);
  EXPECT_THROW(TradeSequence({1.0, 2.0}, {1.0}), InputShapeError);
}

TEST(CountTrades, Examples) {
  const TradeSequence s({0.5, 1.2, 3.0}, {1.0, 1.0, 1.0});
  EXPECT_EQ(count_trades(s, 2.0), 2u);
  EXPECT_EQ(count_trades(s, 0.0), 0u);
  EXPECT_EQ(count_trades(s, 3.0), 3u);
  EXPECT_EQ(count_trades(s, 10.0), 3u);
}

TEST(LogPrice, Examples) {
  const TradeSequence s = from_increments({1.0, 2.0}, {0.1, -0.05});
  EXPECT_NEAR(log_price_process(s, 2.5), 0.05, 1e-15);
  EXPECT_EQ(log_price_process(s, 0.5), 0.0);
  for (std::size_t n = 0; n < s.size(); ++n) {
    EXPECT_NEAR(log_price_process(s, s.t()[n]), std::log(s.p()[n]), 1e-15);
  }
}

TEST(Diffusion, Coefficients) {
  EXPECT_DOUBLE_EQ(diffusion_coefficients({-1.0, 3.0, 1.0, 1.0, 0.1}).m, 1.0);
  EXPECT_DOUBLE_EQ(diffusion_coefficients({-1.0, 3.0, 1.0, 2.0, 0.1}).s, 1.25);
}

TEST(Diffusion, ScaledProcessCentered) {
  const ModelParams p{-1.0, 3.0, 1.0, 1.0, 0.1};
  // Z(1 / delta) = m / delta = 10 exactly.
  const TradeSequence s = from_increments({4.0}, {10.0});
  EXPECT_NEAR(scaled_process(s, p, 1.0), 0.0, 1e-12);
}

TEST(ExactSampler, DeterministicAndValid) {
  const auto a = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), 500, 7);
  const auto b = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), 500, 7);
  EXPECT_EQ(a.t(), b.t());
  EXPECT_EQ(a.p(), b.p());
  EXPECT_EQ(a.size(), 500u);
  const auto c = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), 500, 8);
  EXPECT_NE(a.t(), c.t());
  EXPECT_THROW(exact_trade_sequence(kBase, 1.0, 1.1, 10, 1), DomainError);
}

TEST(ExactSampler, HorizonVersionIsPrefix) {
  const auto full = exact_trade_sequence(kBase, 1.2, 0.9, 2000, 3);
  const double horizon = full.t()[1000] + 1e-9;
  const auto until = exact_trades_until(kBase, 1.2, 0.9, horizon, 3);
  ASSERT_EQ(until.size(), 1001u);
  for (std::size_t i = 0; i < until.size(); ++i) {
    EXPECT_EQ(until.t()[i], full.t()[i]);
    EXPECT_EQ(until.p()[i], full.p()[i]);
  }
  Rng rng(3);
  EXPECT_DOUBLE_EQ(exact_log_price_at(kBase, 1.2, 0.9, horizon, rng), std::log(until.p().back()));
}

TEST(ExactSampler, FirstTradeFollowsStartingSpread) {
  // Starting quotes a0, b0 give V_1 ~ IG with alpha - beta = ln(a0 / b0).
  const JointLawParams jp{kBase, std::log(1.5), std::log(0.8)};
  const IGParams v = v_marginal_params(jp);
  std::vector<double> t1(20000);
  for (std::size_t i = 0; i < t1.size(); ++i) t1[i] = exact_trade_sequence(kBase, 1.5, 0.8, 1, i).t()[0];
  EXPECT_LT(ks_statistic(t1, [&](double x) { return ig_cdf(v, x); }), 1.63 / std::sqrt(20000.0));
}

TEST(ExactSampler, PairMoments) {
  const std::size_t n = 200000;
  const auto s = exact_trade_sequence(kBase, std::exp(0.1), std::exp(-0.1), n + 1, 21);
  std::vector<double> u(s.u().begin() + 1, s.u().end()), v(s.v().begin() + 1, s.v().end());
  const double rn = static_cast<double>(n);
  EXPECT_NEAR(mean(v), 0.1, 3.0 * std::sqrt(variance(v) / rn));
  EXPECT_NEAR(mean(u), 0.0, 3.0 * std::sqrt(variance(u) / rn));
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (u[i] - mean(u)) * (v[i] - mean(v));
  EXPECT_NEAR(mean(prod), 0.0, 3.0 * std::sqrt(variance(prod) / rn));
}

TEST(ExactSampler, GenericPairsMatchClosedFormMoments) {
  const std::size_t n = 400000;
  const double rn = static_cast<double>(n);
  for (double d : {0.1, 0.01}) {
    const ModelParams p{-1.0, 2.0, 1.0, 1.5, d};
    const UVMoments want = closed_form_moments(p);
    const JointLawParams jp{p, d, -d};
    Rng rng(5);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) std::tie(u[i], v[i]) = sample_uv(jp, rng);
    const double mu = mean(u), mv = mean(v);
    std::vector<double> uu(n), vv(n), uv(n);
    for (std::size_t i = 0; i < n; ++i) {
      uu[i] = (u[i] - mu) * (u[i] - mu);
      vv[i] = (v[i] - mv) * (v[i] - mv);
      uv[i] = (u[i] - mu) * (v[i] - mv);
    }
    auto se = [&](const std::vector<double>& x) { return std::sqrt(variance(x) / rn); };
    EXPECT_NEAR(mv, want.mean_v, 5.0 * se(v)) << "delta " << d;
    EXPECT_NEAR(mu, want.mean_u, 5.0 * se(u)) << "delta " << d;
    EXPECT_NEAR(mean(vv), want.var_v, 5.0 * se(vv)) << "delta " << d;
    EXPECT_NEAR(mean(uu), want.var_u, 5.0 * se(uu)) << "delta " << d;
    EXPECT_NEAR(mean(uv), want.cov_uv, 5.0 * se(uv)) << "delta " << d;
  }
}

TEST(Renewal, IndependentOfThreadCount) {
  const auto a = renewal_moment_check(kBase, 5.0, 400, 9, 1);
  const auto b = renewal_moment_check(kBase, 5.0, 400, 9, 3);
  EXPECT_EQ(a.mean_z, b.mean_z);
  EXPECT_EQ(a.var_z, b.var_z);
  EXPECT_DOUBLE_EQ(a.target_var, 0.5 * 5.0);
}

TEST(TradesCsv, HeaderAndRows) {
  const TradeSequence s({0.5, 1.25}, {1.0, 2.5});
  std::ostringstream os;
  write_trades_csv(os, s);
  EXPECT_EQ(os.str(), "timestamp_s,price\n0.5,1\n1.25,2.5\n");
}
