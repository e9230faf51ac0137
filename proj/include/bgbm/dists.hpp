#pragma once

#include <cstdint>
#include <utility>

#include "bgbm/params.hpp"
#include "bgbm/rng.hpp"

namespace bgbm {

// Inverse Gaussian law of the first passage of a unit-variance Brownian
// motion with drift a2 to level a1: density
//   a1 / sqrt(2 pi x^3) * exp(-(a1 - a2 x)^2 / (2 x)),  x > 0.
// Mean a1/a2, variance a1/a2^3.
struct IGParams {
  double a1 = 1.0;
  double a2 = 1.0;
};

// Normal inverse Gaussian: Y | X = x ~ N(mu + beta x, x) with
// X ~ IG(delta, sqrt(alpha^2 - beta^2)).
struct NIGParams {
  double alpha = 1.0;
  double beta = 0.0;
  double mu = 0.0;
  double delta = 1.0;
};

// Exponents of exp(s U + t V) in the joint moment generating function.
struct MgfArgument {
  double s = 0.0;
  double t = 0.0;
};

// Law of the first meeting (time V, log-level U) of two independent
// Brownian log-prices started at alpha > beta.
struct JointLawParams {
  ModelParams model;
  double alpha = 0.0;
  double beta = 0.0;
};

// First two moments of a generic inter-trade pair (U, V).
struct UVMoments {
  double mean_v = 0.0;
  double mean_u = 0.0;
  double var_v = 0.0;
  double var_u = 0.0;
  double cov_uv = 0.0;
};

void validate(const IGParams& p);
void validate(const NIGParams& p);
void validate(const JointLawParams& p);

double ig_pdf(const IGParams& p, double x);
double ig_cdf(const IGParams& p, double x);
// Moment generating function E exp(t X), defined for t <= a2^2 / 2.
double ig_mgf(const IGParams& p, double t);
// Transformation-with-acceptance sampler: one normal and one uniform per
// draw, no rejection loop.
double ig_sample(const IGParams& p, Rng& rng);
double ig_sample(const IGParams& p, std::uint64_t seed);

double nig_pdf(const NIGParams& p, double y);
// Numerical integral of nig_pdf over (-inf, y].
double nig_cdf(const NIGParams& p, double y);
double nig_sample(const NIGParams& p, Rng& rng);
double nig_sample(const NIGParams& p, std::uint64_t seed);

// Modified Bessel function of the second kind, order 1. Power series for
// z <= 2, Steed's continued fraction above.
double bessel_k1(double z);
// exp(z) * K1(z), finite for large z.
double bessel_k1_scaled(double z);
// Slow reference: trapezoidal quadrature of the defining integral after the
// substitution t = exp(u), refined until successive estimates agree.
double bessel_k1_quadrature(double z);

double joint_uv_pdf(const JointLawParams& p, double x, double t);
IGParams v_marginal_params(const JointLawParams& p);
NIGParams u_marginal_params(const JointLawParams& p);

// Mean and variance of U given V = t.
std::pair<double, double> u_given_v(const JointLawParams& p, double t);

// Draw (U, V): V from the IG marginal, then U | V from the normal
// conditional. Returns {u, v}.
std::pair<double, double> sample_uv(const JointLawParams& p, Rng& rng);

// Discriminant of the quadratic that defines theta(s, t); the MGF exists
// where it is nonnegative.
double mgf_discriminant(const ModelParams& params, const MgfArgument& arg);
double mgf_theta(const ModelParams& params, const MgfArgument& arg);
double mgf(const ModelParams& params, const MgfArgument& arg);

UVMoments closed_form_moments(const ModelParams& params);

}  // namespace bgbm
