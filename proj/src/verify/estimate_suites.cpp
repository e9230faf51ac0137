#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "bgbm/errors.hpp"
#include "bgbm/estimate.hpp"
#include "bgbm/forecast.hpp"
#include "bgbm/rng.hpp"
#include "bgbm/trading.hpp"
#include "common.hpp"

namespace bgbm::verify {

using namespace detail;

namespace {

std::array<double, 5> as_array(const ModelParams& p) {
  return {p.mu_a, p.mu_b, p.sigma_a, p.sigma_b, p.delta};
}

const char* kParamNames[] = {"mu_a", "mu_b", "sigma_a", "sigma_b", "delta"};

}  // namespace

SuiteReport estimator_suite(const VerifyConfig& cfg) {
  SuiteReport rep{"estimator", {}};

  // Population round trip on random parameter sets.
  {
    Rng rng(cfg.seed, 0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      ModelParams th;
      th.mu_a = -2.0 + 3.0 * rng.uniform();
      th.mu_b = th.mu_a + 0.1 + 3.0 * rng.uniform();
      th.sigma_a = 0.2 + 1.8 * rng.uniform();
      th.sigma_b = 0.2 + 1.8 * rng.uniform();
      th.delta = 0.01 + 0.5 * rng.uniform();
      const auto got = as_array(fit(population_moments(th)).theta_hat);
      const auto want = as_array(th);
      for (int j = 0; j < 5; ++j) {
        worst = std::max(worst, std::abs(got[j] - want[j]) / std::max(1.0, std::abs(want[j])));
      }
    }
    rep.entries.push_back(at_most("population_round_trip_max_err", 0.0, worst, 1e-10));
  }

  // Simulated data against delta-method standard errors.
  {
    const ModelParams th{-1.0, 1.0, 1.0, 1.0, 0.1};
    const std::size_t n = reps_or(cfg, 100000);
    const TradeSequence seq = exact_trade_sequence(th, std::exp(th.delta), std::exp(-th.delta), n + 1, cfg.seed);
    const EstimateResult r = fit(sample_moments(seq));
    const auto se = asymptotic_stderr(seq, r);
    const auto got = as_array(r.theta_hat);
    const auto want = as_array(th);
    for (int j = 0; j < 5; ++j) {
      rep.entries.push_back(near(std::string("fit_") + kParamNames[j], want[j], got[j], 5.0 * se[j]));
    }
  }

  // Well-definedness on arbitrary data sets.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t d = 0; d < 1000; ++d) {
      Rng rng(cfg.seed ^ 0x6c656d6d61ULL, d);
      const std::size_t n = 10 + static_cast<std::size_t>(190.0 * rng.uniform());
      const double scale_v = std::pow(10.0, -2.0 + 3.0 * rng.uniform());
      const double scale_u = std::pow(10.0, -3.0 + 3.0 * rng.uniform());
      const double rho = 2.0 * rng.uniform() - 1.0;
      std::vector<double> t(n), p(n);
      double tt = 0.0, lp = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = -scale_v * std::log(rng.uniform());
        const double u = scale_u * (rho * (v / scale_v - 1.0) + rng.normal());
        tt += v;
        lp += u;
        t[i] = tt;
        p[i] = std::exp(lp);
      }
      const SampleMoments m = sample_moments(TradeSequence(t, p));
      for (double q : well_definedness_terms(m)) worst = std::min(worst, q);
    }
    rep.entries.push_back({"lemma5_min_term", 0.0, worst, 1e-12, worst >= -1e-12});
  }
  return rep;
}

SuiteReport forecast_suite(const VerifyConfig& cfg) {
  const ModelParams th{-0.5e-4, 1.5e-4, 1e-3, 1e-3, 1e-3};
  const TickData data = synthetic_session(th, 20.0, 23400.0, cfg.seed);
  SuiteReport rep{"forecast", {}};

  const double leads[] = {60.0, 120.0, 300.0, 600.0};
  double prev_max = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    ForecastConfig fc;
    fc.lead_time_s = leads[k];
    fc.threads = threads_of(cfg);
    const BacktestResult bt = backtest(data, fc);
    char name[64];
    if (k == 0) {
      rep.entries.push_back({"band_coverage_lead_60", 0.9973, bt.summary.band_coverage, 0.985,
                             bt.summary.band_coverage >= 0.985});
      auto trace = delta_trace(bt);
      std::vector<double> d;
      for (const auto& p : trace) d.push_back(p.delta_hat);
      if (d.empty()) throw InsufficientDataError("forecast: no fitted windows");
      std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
      const double ratio = d[d.size() / 2] / th.delta;
      rep.entries.push_back({"median_delta_hat_over_delta", 1.0, ratio, 2.0, ratio >= 0.5 && ratio <= 2.0});
    } else {
      std::snprintf(name, sizeof(name), "max_abs_re_increase_lead_%g_to_%g", leads[k - 1], leads[k]);
      const double inc = bt.summary.max_abs_re - prev_max;
      rep.entries.push_back({name, 0.0, inc, 0.0, inc >= 0.0});
    }
    prev_max = bt.summary.max_abs_re;
  }
  return rep;
}

}  // namespace bgbm::verify
