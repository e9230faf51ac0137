#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "bgbm/dists.hpp"
#include "bgbm/numeric.hpp"
#include "bgbm/rng.hpp"
#include "bgbm/trading.hpp"
#include "common.hpp"

namespace bgbm::verify {

using namespace detail;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Raw moments E V, E U, E V^2, E U^2, E UV from the closed forms.
std::array<double, 5> raw_moments(const ModelParams& th) {
  const UVMoments c = closed_form_moments(th);
  return {c.mean_v, c.mean_u, c.var_v + c.mean_v * c.mean_v, c.var_u + c.mean_u * c.mean_u,
          c.cov_uv + c.mean_u * c.mean_v};
}

// Same moments from finite differences of the MGF at the origin.
std::array<double, 5> fd_moments(const ModelParams& th) {
  auto phi = [&th](double s, double t) { return mgf(th, {s, t}); };
  const double h1 = 1e-6;
  const double h2 = 1e-4;
  const double p0 = phi(0.0, 0.0);
  return {
      (phi(0.0, h1) - phi(0.0, -h1)) / (2.0 * h1),
      (phi(h1, 0.0) - phi(-h1, 0.0)) / (2.0 * h1),
      (phi(0.0, h2) - 2.0 * p0 + phi(0.0, -h2)) / (h2 * h2),
      (phi(h2, 0.0) - 2.0 * p0 + phi(-h2, 0.0)) / (h2 * h2),
      (phi(h2, h2) - phi(h2, -h2) - phi(-h2, h2) + phi(-h2, -h2)) / (4.0 * h2 * h2),
  };
}

// Inverse of a continuous increasing CDF by bisection on [lo, hi].
template <typename Cdf>
double quantile(Cdf&& cdf, double p, double lo, double hi) {
  while (cdf(lo) > p) lo -= (hi - lo);
  while (cdf(hi) < p) hi += (hi - lo);
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// CDF values at sorted points: the first from the closed form, the rest by
// adding 5-point Gauss-Legendre integrals of the density over each gap.
template <typename Pdf>
std::vector<double> cdf_at_sorted(const std::vector<double>& xs, double first_cdf, Pdf&& pdf) {
  static const double node[] = {0.0, 0.5384693101056831, 0.9061798459386640};
  static const double weight[] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
  std::vector<double> out(xs.size());
  double acc = first_cdf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) {
      const double a = xs[i - 1], b = xs[i];
      const double c = 0.5 * (a + b), r = 0.5 * (b - a);
      double s = weight[0] * pdf(c);
      for (int k = 1; k < 3; ++k) s += weight[k] * (pdf(c - r * node[k]) + pdf(c + r * node[k]));
      acc += r * s;
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

SuiteReport mgf_suite(const VerifyConfig&) {
  SuiteReport rep{"mgf", {}};
  const ModelParams cases[] = {{-1.0, 1.0, 1.0, 1.0, 0.1}, {-0.5, 2.0, 0.8, 1.3, 0.05}};
  const char* labels[] = {"E_V", "E_U", "E_V2", "E_U2", "E_UV"};
  for (std::size_t c = 0; c < 2; ++c) {
    const ModelParams& th = cases[c];
    const auto want = raw_moments(th);
    const auto got = fd_moments(th);
    // Zero targets get an absolute tolerance on the scale of the matching
    // second moment.
    const double scale[] = {std::sqrt(want[2]), std::sqrt(want[3]), want[2], want[3], std::sqrt(want[2] * want[3])};
    for (int j = 0; j < 5; ++j) {
      char name[64];
      std::snprintf(name, sizeof(name), "case%zu_%s", c + 1, labels[j]);
      const double tol = want[j] != 0.0 ? 1e-5 * std::abs(want[j]) : 1e-5 * scale[j];
      rep.entries.push_back(near(name, want[j], got[j], tol));
    }
    char name[64];
    std::snprintf(name, sizeof(name), "case%zu_theta_origin", c + 1);
    rep.entries.push_back(near(name, 0.0, mgf_theta(th, {0.0, 0.0}), 0.0));

    // Branch check: mgf(0, t) against the IG moment generating function.
    const IGParams ig = v_marginal_params({th, th.delta, -th.delta});
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double t = -1.0 + 0.01 * k;
      worst = std::max(worst, std::abs(mgf(th, {0.0, t}) - ig_mgf(ig, t)));
    }
    std::snprintf(name, sizeof(name), "case%zu_ig_mgf_max_abs_diff", c + 1);
    rep.entries.push_back(at_most(name, 0.0, worst, 1e-10));
  }
  return rep;
}

SuiteReport densities_suite(const VerifyConfig& cfg) {
  SuiteReport rep{"densities", {}};
  const std::size_t draws = reps_or(cfg, 1000000);
  const unsigned threads = threads_of(cfg);
  const ModelParams th{-1.0, 1.0, 1.0, 1.0, 0.1};

  // Normalizations.
  const IGParams ig_cases[] = {{1.0, 1.0}, {0.5, 2.0}, {3.0, 0.3}};
  for (const auto& p : ig_cases) {
    const double m = p.a1 / p.a2;
    auto f = [&p](double x) { return ig_pdf(p, x); };
    const double total = integrate(f, 0.0, m, 1e-12).value + integrate(f, m, kInf, 1e-12).value;
    char name[64];
    std::snprintf(name, sizeof(name), "ig_norm_%g_%g", p.a1, p.a2);
    rep.entries.push_back(near(name, 1.0, total, 1e-8));
  }

  const NIGParams nig = u_marginal_params({th, th.delta, -th.delta});
  {
    auto f = [&nig](double y) { return nig_pdf(nig, y); };
    const double c = nig.mu;
    const double total = integrate(f, -kInf, c - nig.delta, 1e-12).value +
                         integrate(f, c - nig.delta, c, 1e-12).value +
                         integrate(f, c, c + nig.delta, 1e-12).value +
                         integrate(f, c + nig.delta, kInf, 1e-12).value;
    rep.entries.push_back(near("nig_norm", 1.0, total, 1e-6));
  }

  const JointLawParams jp{th, 0.1, -0.1};
  {
    auto inner = [&jp](double t) {
      const auto [m, var] = u_given_v(jp, t);
      const double sd = std::sqrt(var);
      auto g = [&jp, t](double x) { return joint_uv_pdf(jp, x, t); };
      return integrate(g, -kInf, m - sd, 1e-12).value + integrate(g, m - sd, m + sd, 1e-12).value +
             integrate(g, m + sd, kInf, 1e-12).value;
    };
    const double ev = v_marginal_params(jp).a1 / v_marginal_params(jp).a2;
    const double total = integrate(inner, 0.0, ev, 1e-10).value + integrate(inner, ev, kInf, 1e-10).value;
    rep.entries.push_back(near("joint_norm", 1.0, total, 1e-6));
  }

  // Samplers against densities.
  const std::size_t block = 10000;
  {
    const IGParams p{1.0, 2.0};
    std::vector<double> xs(draws);
    for_blocks(draws, block, threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
      Rng rng(cfg.seed, b);
      for (std::size_t i = begin; i < end; ++i) xs[i] = ig_sample(p, rng);
    });
    const double ks = ks_statistic(xs, [&p](double x) { return ig_cdf(p, x); });
    rep.entries.push_back(below("ig_sampler_ks", 0.0, ks, 0.002));
  }
  {
    std::vector<double> ys(draws);
    for_blocks(draws, block, threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
      Rng rng(cfg.seed ^ 0x6e6967ULL, b);
      for (std::size_t i = begin; i < end; ++i) ys[i] = nig_sample(nig, rng);
    });
    std::sort(ys.begin(), ys.end());
    const auto cdf = cdf_at_sorted(ys, nig_cdf(nig, ys.front()), [&](double y) { return nig_pdf(nig, y); });
    rep.entries.push_back(below("nig_sampler_ks", 0.0, ks_statistic_sorted(cdf), 0.002));
  }

  // Joint law: first-trade pairs from the exact sampler binned on a 20 x 20
  // grid of marginal quantiles, expected counts from the density integrated
  // over each cell.
  {
    const std::size_t bins = 20;
    const IGParams igv = v_marginal_params(jp);
    std::vector<double> t_edges(bins + 1), x_edges(bins + 1);
    t_edges[0] = 0.0;
    t_edges[bins] = kInf;
    x_edges[0] = -kInf;
    x_edges[bins] = kInf;
    const double ev = igv.a1 / igv.a2;
    for (std::size_t k = 1; k < bins; ++k) {
      const double q = static_cast<double>(k) / static_cast<double>(bins);
      t_edges[k] = quantile([&](double t) { return ig_cdf(igv, t); }, q, 1e-6 * ev, 10.0 * ev);
      x_edges[k] = quantile([&](double x) { return nig_cdf(nig, x); }, q, nig.mu - 1.0, nig.mu + 1.0);
    }

    std::vector<std::vector<double>> counts((draws + block - 1) / block, std::vector<double>(bins * bins, 0.0));
    const double a0 = std::exp(jp.alpha), b0 = std::exp(jp.beta);
    for_blocks(draws, block, threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const TradeSequence s = exact_trade_sequence(th, a0, b0, 1, substream_seed(cfg.seed, i));
        const double t = s.v()[0], x = s.u()[0];
        const auto ti = static_cast<std::size_t>(std::upper_bound(t_edges.begin(), t_edges.end(), t) - t_edges.begin()) - 1;
        const auto xi = static_cast<std::size_t>(std::upper_bound(x_edges.begin(), x_edges.end(), x) - x_edges.begin()) - 1;
        counts[b][std::min(ti, bins - 1) * bins + std::min(xi, bins - 1)] += 1.0;
      }
    });
    std::vector<double> observed(bins * bins, 0.0), expected(bins * bins, 0.0);
    for (const auto& blk : counts) {
      for (std::size_t c = 0; c < blk.size(); ++c) observed[c] += blk[c];
    }
    for (std::size_t i = 0; i < bins; ++i) {
      for (std::size_t j = 0; j < bins; ++j) {
        auto inner = [&](double t) {
          return integrate([&](double x) { return joint_uv_pdf(jp, x, t); }, x_edges[j], x_edges[j + 1], 1e-13,
                           1e-10)
              .value;
        };
        expected[i * bins + j] =
            static_cast<double>(draws) * integrate(inner, t_edges[i], t_edges[i + 1], 1e-12, 1e-10).value;
      }
    }
    // Cells expecting fewer than 5 draws are pooled into one.
    double chi2 = 0.0, pool_o = 0.0, pool_e = 0.0;
    std::size_t cells = 0;
    for (std::size_t c = 0; c < observed.size(); ++c) {
      if (expected[c] < 5.0) {
        pool_o += observed[c];
        pool_e += expected[c];
        continue;
      }
      chi2 += (observed[c] - expected[c]) * (observed[c] - expected[c]) / expected[c];
      ++cells;
    }
    if (pool_e > 0.0) {
      chi2 += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
      ++cells;
    }
    const boost::math::chi_squared dist(static_cast<double>(cells - 1));
    const double crit = boost::math::quantile(dist, 0.99);
    rep.entries.push_back(below("joint_chi2_20x20", static_cast<double>(cells - 1), chi2, crit));
  }

  // Bessel K1: fast evaluator against the quadrature of its integral.
  {
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double z = std::pow(10.0, -3.0 + 5.0 * k / 49.0);
      const double ref = bessel_k1_quadrature(z);
      worst = std::max(worst, std::abs(bessel_k1(z) - ref) / ref);
    }
    rep.entries.push_back(at_most("bessel_k1_max_rel_diff", 0.0, worst, 1e-9));
  }
  return rep;
}

}  // namespace bgbm::verify
