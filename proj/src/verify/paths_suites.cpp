#include <algorithm>
#include <cstdio>
#include <limits>
#include <cmath>
#include <cstring>
#include <vector>

#include <Eigen/Core>

#include "bgbm/numeric.hpp"
#include "bgbm/paths.hpp"
#include "bgbm/rng.hpp"
#include "common.hpp"

namespace bgbm::verify {

using namespace detail;

namespace {

// One step of a reflected Brownian motion on [0, inf), exact in law: the
// increment and the minimum of the Brownian bridge over the step are drawn
// jointly, and the Skorohod map is applied to that minimum.
struct RbmStepper {
  double drift_h, sd_h, var_h;

  RbmStepper(double mu, double sigma2, double h)
      : drift_h(mu * h), sd_h(std::sqrt(sigma2 * h)), var_h(sigma2 * h) {}

  double step(double r, Rng& rng) const {
    const double d = drift_h + sd_h * rng.normal();
    const double m = 0.5 * (d - std::sqrt(d * d - 2.0 * var_h * std::log(rng.uniform())));
    return std::max(r + d, d - m);
  }
};

}  // namespace

SuiteReport skorohod_suite(const VerifyConfig& cfg) {
  const std::size_t n_paths = reps_or(cfg, 1000);
  const std::size_t n_steps = 10000;
  const double h = 1e-3;
  std::vector<double> mismatches(n_paths, 0.0);
  std::vector<double> max_l(n_paths, 0.0);

  parallel_for(n_paths, threads_of(cfg), [&](std::size_t r) {
    Rng rng(cfg.seed, r);
    const std::size_t n = n_steps + 1;
    std::vector<double> xa(n), xb(n), neg(n), oracle(n);
    // Random drifts and volatilities so that the regulator sees both quiet
    // stretches and repeated pushes.
    const double mu_a = -2.0 * rng.uniform();
    const double mu_b = 2.0 * rng.uniform();
    const double sa = 0.1 + rng.uniform();
    const double sb = 0.1 + rng.uniform();
    xa[0] = 0.2 * rng.uniform();
    xb[0] = -0.2 * rng.uniform();
    const double sq = std::sqrt(h);
    for (std::size_t i = 1; i < n; ++i) {
      xa[i] = xa[i - 1] + mu_a * h + sa * sq * rng.normal();
      xb[i] = xb[i - 1] + mu_b * h + sb * sq * rng.normal();
    }
    // O(n^2) reference: sup over each prefix, recomputed from scratch.
    for (std::size_t j = 0; j < n; ++j) neg[j] = std::max(xb[j] - xa[j], 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      oracle[i] = Eigen::Map<const Eigen::ArrayXd>(neg.data(), static_cast<Eigen::Index>(i + 1)).maxCoeff();
    }
    const std::vector<double> l = skorohod_regulator(xa, xb);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::memcmp(&l[i], &oracle[i], sizeof(double)) != 0) ++bad;
    }
    mismatches[r] = static_cast<double>(bad);
    max_l[r] = l.back();
  });

  SuiteReport rep{"skorohod", {}};
  rep.entries.push_back(at_most("bitwise_mismatches", 0.0, ordered_sum(mismatches), 0.0));
  // Guard against a vacuous comparison: most paths must have been pushed.
  std::size_t pushed = 0;
  for (double v : max_l) pushed += v > 0.0;
  rep.entries.push_back(
      {"fraction_paths_with_regulation", 1.0, static_cast<double>(pushed) / static_cast<double>(n_paths), 0.5,
       static_cast<double>(pushed) >= 0.5 * static_cast<double>(n_paths)});
  return rep;
}

SuiteReport rbm_law_suite(const VerifyConfig& cfg) {
  const std::size_t n_paths = reps_or(cfg, 1000000);
  const std::size_t n_steps = 100;
  const double x0 = 1.0, mu = -1.0, sigma2 = 1.0, t = 1.0;
  const std::vector<double> levels = {0.5, 1.0, 2.0};
  const RbmStepper stepper(mu, sigma2, t / static_cast<double>(n_steps));

  const std::size_t block = 10000;
  const std::size_t n_blocks = (n_paths + block - 1) / block;
  std::vector<std::vector<double>> counts(n_blocks, std::vector<double>(levels.size(), 0.0));
  for_blocks(n_paths, block, threads_of(cfg), [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(cfg.seed, b);
    for (std::size_t p = begin; p < end; ++p) {
      double r = x0;
      for (std::size_t k = 0; k < n_steps; ++k) r = stepper.step(r, rng);
      for (std::size_t j = 0; j < levels.size(); ++j) counts[b][j] += r <= levels[j];
    }
  });

  SuiteReport rep{"rbm_law", {}};
  for (std::size_t j = 0; j < levels.size(); ++j) {
    double c = 0.0;
    for (const auto& blk : counts) c += blk[j];
    const double f_hat = c / static_cast<double>(n_paths);
    const double f = rbm_transient_cdf({x0, levels[j], t, mu, sigma2});
    const double se = std::sqrt(f * (1.0 - f) / static_cast<double>(n_paths));
    char name[64];
    std::snprintf(name, sizeof(name), "cdf_y_%g", levels[j]);
    rep.entries.push_back(near(name, f, f_hat, 3.0 * se));
  }
  return rep;
}

SuiteReport ratio_moment_suite(const VerifyConfig& cfg) {
  const ModelParams theta{-1.0, 1.0, 1.0, 1.0, 0.1};
  const std::size_t n_paths = reps_or(cfg, 1000000);
  const std::size_t n_steps = 50;
  const double t = 1.0;
  // A(0) = B(0): the log spread Y_a - Y_b is a reflected Brownian motion
  // from 0 with drift mu_a - mu_b and variance sigma_a^2 + sigma_b^2.
  const RbmStepper stepper(theta.mu_a - theta.mu_b, theta.total_variance(), t / static_cast<double>(n_steps));

  const std::size_t block = 10000;
  const std::size_t n_blocks = (n_paths + block - 1) / block;
  std::vector<double> sum(n_blocks, 0.0), sum2(n_blocks, 0.0);
  for_blocks(n_paths, block, threads_of(cfg), [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng(cfg.seed, b);
    for (std::size_t p = begin; p < end; ++p) {
      double r = 0.0;
      for (std::size_t k = 0; k < n_steps; ++k) r = stepper.step(r, rng);
      const double e = std::exp(r);
      sum[b] += e;
      sum2[b] += e * e;
    }
  });
  const double n = static_cast<double>(n_paths);
  const double mc = ordered_sum(sum) / n;
  const double mc_var = (ordered_sum(sum2) / n - mc * mc) * n / (n - 1.0);

  SuiteReport rep{"ratio_moment", {}};
  const double formula = ratio_moment(theta, 1, t);
  rep.entries.push_back(near("k1_t1_vs_monte_carlo", mc, formula, 0.02 * mc));
  rep.entries.push_back(at_most("k1_t1_monte_carlo_se", 0.0, std::sqrt(mc_var / n), 0.002 * mc));

  // Stationary limit against the power law kappa / (kappa - k).
  const double inf = std::numeric_limits<double>::infinity();
  const ModelParams cases[] = {{-1.0, 1.0, 1.0, 1.0, 0.1}, {-1.0, 1.0, 0.5, 0.5, 0.1}, {-0.5, 2.0, 0.8, 1.3, 0.1}};
  for (const auto& c : cases) {
    const double kappa = stationary_tail_exponent(c);
    char name[64];
    std::snprintf(name, sizeof(name), "k1_stationary_kappa_%.4g", kappa);
    rep.entries.push_back(near(name, kappa / (kappa - 1.0), ratio_moment(c, 1, inf), 1e-6));
  }
  return rep;
}

}  // namespace bgbm::verify
