#include "bgbm/dists.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bgbm/errors.hpp"
#include "bgbm/numeric.hpp"

namespace bgbm {

void validate(const IGParams& p) {
  if (!(p.a1 > 0.0) || !std::isfinite(p.a1)) throw DomainError("IGParams: a1 must be > 0");
  if (!(p.a2 > 0.0) || !std::isfinite(p.a2)) throw DomainError("IGParams: a2 must be > 0");
}

void validate(const NIGParams& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.mu) ||
      !std::isfinite(p.delta)) {
    throw DomainError("NIGParams: parameters must be finite");
  }
  if (!(p.alpha > std::abs(p.beta))) throw DomainError("NIGParams: need alpha > |beta|");
  if (!(p.delta > 0.0)) throw DomainError("NIGParams: delta must be > 0");
}

void validate(const JointLawParams& p) {
  validate(p.model);
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !(p.alpha > p.beta)) {
    throw DomainError("JointLawParams: need finite alpha > beta");
  }
}

double ig_pdf(const IGParams& p, double x) {
  validate(p);
  if (std::isnan(x)) throw DomainError("ig_pdf: x is NaN");
  if (x <= 0.0 || std::isinf(x)) return 0.0;
  const double r = p.a1 - p.a2 * x;
  // Log space: x^3 underflows long before the exponential factor does.
  return std::exp(std::log(p.a1 / std::sqrt(2.0 * kPi)) - 1.5 * std::log(x) - r * r / (2.0 * x));
}

double ig_cdf(const IGParams& p, double x) {
  validate(p);
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double sx = std::sqrt(x);
  const double v = normal_cdf((p.a2 * x - p.a1) / sx) +
                   exp_times_normal_cdf(2.0 * p.a1 * p.a2, -(p.a2 * x + p.a1) / sx);
  return std::min(v, 1.0);
}

double ig_mgf(const IGParams& p, double t) {
  validate(p);
  const double disc = p.a2 * p.a2 - 2.0 * t;
  if (disc < 0.0) throw DomainError("ig_mgf: needs t <= a2^2 / 2");
  // a2 - sqrt(a2^2 - 2t) without cancellation near t = 0.
  return std::exp(p.a1 * 2.0 * t / (p.a2 + std::sqrt(disc)));
}

double ig_sample(const IGParams& p, Rng& rng) {
  const double m = p.a1 / p.a2;
  const double lambda = p.a1 * p.a1;
  const double z = rng.normal();
  const double y = z * z;
  const double my = m * y;
  // Larger root of the quadratic; the smaller one is m^2 / x2, which avoids
  // the cancellation of the textbook formula.
  const double x2 = m + m * my / (2.0 * lambda) + m / (2.0 * lambda) * std::sqrt(4.0 * lambda * my + my * my);
  const double x1 = m * m / x2;
  return rng.uniform() * (m + x1) <= m ? x1 : x2;
}

double ig_sample(const IGParams& p, std::uint64_t seed) {
  validate(p);
  Rng rng(seed);
  return ig_sample(p, rng);
}

namespace {

double nig_gamma(const NIGParams& p) {
  return std::sqrt((p.alpha - p.beta) * (p.alpha + p.beta));
}

}  // namespace

double nig_pdf(const NIGParams& p, double y) {
  validate(p);
  if (std::isinf(y)) return 0.0;
  const double d = y - p.mu;
  const double r = std::hypot(p.delta, d);
  const double z = p.alpha * r;
  // K1(z) = bessel_k1_scaled(z) * exp(-z); the exponentials are combined so
  // the tails neither overflow nor underflow early.
  const double expo = p.delta * nig_gamma(p) + p.beta * d - z;
  return p.alpha * p.delta / (kPi * r) * bessel_k1_scaled(z) * std::exp(expo);
}

double nig_cdf(const NIGParams& p, double y) {
  validate(p);
  if (std::isinf(y)) return y > 0 ? 1.0 : 0.0;
  const double gamma = nig_gamma(p);
  const double mean = p.mu + p.delta * p.beta / gamma;
  const double sd = std::sqrt(p.delta * p.alpha * p.alpha / (gamma * gamma * gamma));
  auto f = [&p](double v) { return nig_pdf(p, v); };

  // Integrate the shorter tail and split at the scales where the density
  // changes shape (the cusp-like peak of width delta, the bulk of width sd).
  const bool lower = y <= mean;
  std::vector<double> cuts = {p.mu - p.delta, p.mu, p.mu + p.delta, mean - sd, mean, mean + sd};
  std::vector<double> pts;
  for (double c : cuts) {
    if (lower ? c < y : c > y) pts.push_back(c);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> edges;
  edges.push_back(lower ? -inf : y);
  edges.insert(edges.end(), pts.begin(), pts.end());
  edges.push_back(lower ? y : inf);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += integrate(f, edges[i], edges[i + 1], 1e-13, 1e-12).value;
  }
  const double v = lower ? total : 1.0 - total;
  return std::clamp(v, 0.0, 1.0);
}

double nig_sample(const NIGParams& p, Rng& rng) {
  const double x = ig_sample(IGParams{p.delta, nig_gamma(p)}, rng);
  return p.mu + p.beta * x + std::sqrt(x) * rng.normal();
}

double nig_sample(const NIGParams& p, std::uint64_t seed) {
  validate(p);
  Rng rng(seed);
  return nig_sample(p, rng);
}

double joint_uv_pdf(const JointLawParams& p, double x, double t) {
  validate(p);
  if (!(t > 0.0)) throw DomainError("joint_uv_pdf: t must be > 0");
  if (std::isinf(t) || std::isinf(x)) return 0.0;
  const ModelParams& m = p.model;
  const double var = m.total_variance();
  const double w = m.sigma_b / m.sigma_a * (x - p.alpha - m.mu_a * t) +
                   m.sigma_a / m.sigma_b * (x - p.beta - m.mu_b * t);
  const double g = p.alpha - p.beta - m.drift_gap() * t;
  const double expo = -(w * w + g * g) / (2.0 * var * t);
  return (p.alpha - p.beta) / (2.0 * kPi * t * t * m.sigma_a * m.sigma_b) * std::exp(expo);
}

IGParams v_marginal_params(const JointLawParams& p) {
  validate(p);
  const double s = std::sqrt(p.model.total_variance());
  return {(p.alpha - p.beta) / s, p.model.drift_gap() / s};
}

NIGParams u_marginal_params(const JointLawParams& p) {
  validate(p);
  const ModelParams& m = p.model;
  const double va = m.sigma_a * m.sigma_a;
  const double vb = m.sigma_b * m.sigma_b;
  const double var = va + vb;
  NIGParams out;
  out.alpha = std::sqrt(var * (m.mu_a * m.mu_a * vb + m.mu_b * m.mu_b * va)) / (va * vb);
  out.beta = (m.mu_a * vb + m.mu_b * va) / (va * vb);
  out.mu = (p.alpha * vb + p.beta * va) / var;
  out.delta = (p.alpha - p.beta) * m.sigma_a * m.sigma_b / var;
  return out;
}

std::pair<double, double> u_given_v(const JointLawParams& p, double t) {
  const ModelParams& m = p.model;
  const double va = m.sigma_a * m.sigma_a;
  const double vb = m.sigma_b * m.sigma_b;
  const double var = va + vb;
  const double mean = (vb * (p.alpha + m.mu_a * t) + va * (p.beta + m.mu_b * t)) / var;
  return {mean, va * vb * t / var};
}

std::pair<double, double> sample_uv(const JointLawParams& p, Rng& rng) {
  const double v = ig_sample(v_marginal_params(p), rng);
  const auto [mean, var] = u_given_v(p, v);
  return {mean + std::sqrt(var) * rng.normal(), v};
}

double mgf_discriminant(const ModelParams& params, const MgfArgument& arg) {
  const double vb = params.sigma_b * params.sigma_b;
  const double lead = params.drift_gap() + arg.s * vb;
  return lead * lead -
         params.total_variance() * (arg.s * arg.s * vb + 2.0 * arg.t + 2.0 * arg.s * params.mu_b);
}

double mgf_theta(const ModelParams& params, const MgfArgument& arg) {
  validate(params);
  const double disc = mgf_discriminant(params, arg);
  if (!(disc >= 0.0)) {
    throw DomainError("mgf: (s, t) = (" + std::to_string(arg.s) + ", " + std::to_string(arg.t) +
                      ") is outside the existence region (mu_b - mu_a + s sigma_b^2)^2 >= "
                      "(sigma_a^2 + sigma_b^2)(s^2 sigma_b^2 + 2t + 2 s mu_b)");
  }
  const double vb = params.sigma_b * params.sigma_b;
  const double lead = params.drift_gap() + arg.s * vb;
  const double root = std::sqrt(disc);
  // Minus root (lead - root) / S, rationalized when lead + root > 0 so that
  // theta keeps full relative accuracy near the origin.
  if (lead + root > 0.0) {
    return (arg.s * arg.s * vb + 2.0 * arg.t + 2.0 * arg.s * params.mu_b) / (lead + root);
  }
  return (lead - root) / params.total_variance();
}

double mgf(const ModelParams& params, const MgfArgument& arg) {
  return std::exp((2.0 * mgf_theta(params, arg) - arg.s) * params.delta);
}

UVMoments closed_form_moments(const ModelParams& params) {
  validate(params);
  const double d = params.drift_gap();
  const double va = params.sigma_a * params.sigma_a;
  const double vb = params.sigma_b * params.sigma_b;
  const double d3 = d * d * d;
  const double delta = params.delta;
  UVMoments m;
  m.mean_v = 2.0 * delta / d;
  m.mean_u = delta * (params.mu_a + params.mu_b) / d;
  m.var_v = 2.0 * delta * (va + vb) / d3;
  m.var_u = 2.0 * delta * (params.mu_b * params.mu_b * va + params.mu_a * params.mu_a * vb) / d3;
  m.cov_uv = 2.0 * delta * (params.mu_b * va + params.mu_a * vb) / d3;
  return m;
}

}  // namespace bgbm
