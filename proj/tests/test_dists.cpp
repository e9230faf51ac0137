#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bgbm/dists.hpp"
#include "bgbm/errors.hpp"
#include "bgbm/numeric.hpp"

using namespace bgbm;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const ModelParams kBase{-1.0, 1.0, 1.0, 1.0, 0.1};

double log_ig_pdf(const IGParams& p, double x) {
  const double r = p.a2 * x - p.a1;
  return std::log(p.a1) - 0.5 * std::log(2.0 * M_PI) - 1.5 * std::log(x) - r * r / (2.0 * x);
}

}  // namespace

TEST(InverseGaussian, DensityValue) {
  EXPECT_NEAR(ig_pdf({1.0, 1.0}, 1.0), 0.3989423, 1e-7);
  EXPECT_DOUBLE_EQ(ig_pdf({1.0, 1.0}, 1.0), 1.0 / std::sqrt(2.0 * M_PI));
  EXPECT_EQ(ig_pdf({1.0, 1.0}, 0.0), 0.0);
}

TEST(InverseGaussian, Normalized) {
  for (IGParams p : {IGParams{1.0, 1.0}, IGParams{0.5, 2.0}, IGParams{3.0, 0.3}}) {
    const double m = p.a1 / p.a2;
    auto f = [&](double x) { return ig_pdf(p, x); };
    const double total = integrate(f, 0.0, m, 1e-13).value + integrate(f, m, kInf, 1e-13).value;
    EXPECT_NEAR(total, 1.0, 1e-8);
  }
}

TEST(InverseGaussian, CdfIsIntegralOfDensity) {
  const IGParams p{0.5, 2.0};
  for (double x : {0.05, 0.2, 0.5, 1.0, 3.0}) {
    const double want = integrate([&](double v) { return ig_pdf(p, v); }, 0.0, x, 1e-14).value;
    EXPECT_NEAR(ig_cdf(p, x), want, 1e-12);
  }
}

TEST(InverseGaussian, MgfClosedForm) {
  const IGParams p{0.7, 1.9};
  for (double t : {-1.0, -0.3, 0.0, 0.5, 1.5}) {
    const double want =
        integrate([&](double v) { return std::exp(t * v + log_ig_pdf(p, v)); }, 0.0, kInf, 1e-14).value;
    EXPECT_NEAR(ig_mgf(p, t), want, 1e-11 * want);
  }
  EXPECT_THROW(ig_mgf(p, 0.5 * p.a2 * p.a2 + 0.1), DomainError);
}

TEST(InverseGaussian, SamplerMean) {
  const IGParams p{1.0, 2.0};
  Rng rng(5);
  std::vector<double> x(1000000);
  for (double& v : x) v = ig_sample(p, rng);
  const double oracle = integrate([&](double v) { return v * ig_pdf(p, v); }, 0.0, kInf, 1e-14).value;
  EXPECT_NEAR(oracle, 0.5, 1e-12);
  EXPECT_NEAR(mean(x), oracle, 3.0 * std::sqrt(variance(x) / static_cast<double>(x.size())));
}

TEST(InverseGaussian, RejectsBadParameters) {
  EXPECT_THROW(ig_pdf({-1.0, 1.0}, 1.0), DomainError);
  EXPECT_THROW(ig_pdf({1.0, 0.0}, 1.0), DomainError);
}

TEST(BesselK1, ReferenceValues) {
  EXPECT_NEAR(bessel_k1(1.0), 0.6019072301972346, 1e-15);
  for (double z : {1e-3, 0.1, 0.9, 1.9, 2.0, 2.1, 5.0, 20.0, 100.0}) {
    const double ref = std::cyl_bessel_k(1.0, z);
    EXPECT_NEAR(bessel_k1(z) / ref, 1.0, 1e-13) << "z = " << z;
    EXPECT_NEAR(bessel_k1_scaled(z), ref * std::exp(z), 1e-13 * ref * std::exp(z));
  }
}

TEST(BesselK1, LargeArgumentLimit) {
  const double z = 50.0;
  EXPECT_NEAR(bessel_k1(z) * std::exp(z) * std::sqrt(2.0 * z / M_PI), 1.0, 0.01);
  EXPECT_GT(bessel_k1_scaled(1e4), 0.0);
}

TEST(BesselK1, QuadratureAgrees) {
  for (int k = 0; k < 50; ++k) {
    const double z = std::pow(10.0, -3.0 + 5.0 * k / 49.0);
    EXPECT_NEAR(bessel_k1(z) / bessel_k1_quadrature(z), 1.0, 1e-9) << "z = " << z;
  }
}

TEST(NormalInverseGaussian, Normalized) {
  const NIGParams p = u_marginal_params({kBase, 0.1, -0.1});
  auto f = [&](double y) { return nig_pdf(p, y); };
  const double c = p.mu;
  const double total = integrate(f, -kInf, c - p.delta, 1e-13).value + integrate(f, c - p.delta, c, 1e-13).value +
                       integrate(f, c, c + p.delta, 1e-13).value + integrate(f, c + p.delta, kInf, 1e-13).value;
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(NormalInverseGaussian, DensityIsMixture) {
  // NIG(alpha, beta, mu, delta) = N(mu + beta W, W) mixed over W ~ IG(delta, gamma).
  const NIGParams p{2.5, 0.8, 0.1, 0.4};
  const double gamma = std::sqrt(p.alpha * p.alpha - p.beta * p.beta);
  const IGParams w{p.delta, gamma};
  for (double y : {-1.0, 0.0, 0.1, 0.5, 2.0}) {
    auto g = [&](double v) { return normal_pdf((y - p.mu - p.beta * v) / std::sqrt(v)) / std::sqrt(v) * ig_pdf(w, v); };
    const double want = integrate(g, 0.0, 1.0, 1e-15).value + integrate(g, 1.0, kInf, 1e-15).value;
    EXPECT_NEAR(nig_pdf(p, y), want, 1e-10 * want) << "y = " << y;
  }
}

TEST(NormalInverseGaussian, CdfMonotoneAndBounded) {
  const NIGParams p = u_marginal_params({kBase, 0.1, -0.1});
  double prev = 0.0;
  for (double y = -2.0; y <= 2.0; y += 0.05) {
    const double f = nig_cdf(p, y);
    EXPECT_GE(f, prev - 1e-14);
    EXPECT_LE(f, 1.0);
    prev = f;
  }
  EXPECT_EQ(nig_cdf(p, -kInf), 0.0);
  EXPECT_EQ(nig_cdf(p, kInf), 1.0);
}

TEST(NormalInverseGaussian, SamplerKs) {
  const NIGParams p{3.0, -1.0, 0.2, 0.5};
  Rng rng(8);
  std::vector<double> y(20000);
  for (double& v : y) v = nig_sample(p, rng);
  const double ks = ks_statistic(y, [&](double x) { return nig_cdf(p, x); });
  EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(y.size())));
}

TEST(JointLaw, MarginalParameters) {
  // alpha - beta = 0.2, total variance 2, mu_b - mu_a = 2.
  const IGParams v = v_marginal_params({kBase, 0.1, -0.1});
  EXPECT_DOUBLE_EQ(v.a1, 0.2 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(v.a2, 2.0 / std::sqrt(2.0));
}

TEST(JointLaw, VMarginalMatchesIntegratedJoint) {
  const ModelParams m{-0.5, 1.5, 0.8, 1.3, 0.1};
  const JointLawParams jp{m, 0.3, -0.1};
  const IGParams v = v_marginal_params(jp);
  for (double t : {0.02, 0.1, 0.3, 1.0}) {
    const auto [mu, var] = u_given_v(jp, t);
    const double sd = std::sqrt(var);
    auto g = [&](double x) { return joint_uv_pdf(jp, x, t); };
    const double marg = integrate(g, -kInf, mu - sd, 1e-15).value + integrate(g, mu - sd, mu + sd, 1e-15).value +
                        integrate(g, mu + sd, kInf, 1e-15).value;
    EXPECT_NEAR(ig_pdf(v, t), marg, 1e-10 * marg);
  }
}

TEST(JointLaw, UMarginalMatchesIntegratedJoint) {
  const ModelParams m{-0.5, 1.5, 0.8, 1.3, 0.1};
  const JointLawParams jp{m, 0.3, -0.1};
  const NIGParams u = u_marginal_params(jp);
  const double ev = v_marginal_params(jp).a1 / v_marginal_params(jp).a2;
  for (double x : {-0.3, 0.0, 0.1, 0.4}) {
    auto g = [&](double t) { return joint_uv_pdf(jp, x, t); };
    const double marg = integrate(g, 0.0, ev, 1e-15).value + integrate(g, ev, kInf, 1e-15).value;
    EXPECT_NEAR(nig_pdf(u, x), marg, 1e-9 * marg) << "x = " << x;
  }
}

TEST(JointLaw, NigShapeInvariant) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    ModelParams m;
    m.mu_a = 10.0 * (rng.uniform() - 0.5);
    m.mu_b = m.mu_a + 5.0 * rng.uniform() + 1e-6;
    m.sigma_a = 0.01 + 3.0 * rng.uniform();
    m.sigma_b = 0.01 + 3.0 * rng.uniform();
    m.delta = 0.1;
    const double lhs = std::sqrt(m.total_variance() *
                                 (m.mu_a * m.mu_a * m.sigma_b * m.sigma_b + m.mu_b * m.mu_b * m.sigma_a * m.sigma_a));
    const double rhs = std::abs(m.mu_a * m.sigma_b * m.sigma_b + m.mu_b * m.sigma_a * m.sigma_a);
    ASSERT_GT(lhs, rhs);
    const NIGParams u = u_marginal_params({m, m.delta, -m.delta});
    ASSERT_GT(u.alpha, std::abs(u.beta));
  }
}

TEST(JointLaw, PdfRejectsNonpositiveTime) {
  EXPECT_THROW(joint_uv_pdf({kBase, 0.1, -0.1}, 0.0, 0.0), DomainError);
  EXPECT_THROW(joint_uv_pdf({kBase, -0.1, 0.1}, 0.0, 1.0), DomainError);
}

TEST(Moments, BaseCase) {
  const UVMoments m = closed_form_moments(kBase);
  EXPECT_NEAR(m.mean_v, 0.1, 1e-15);
  EXPECT_NEAR(m.mean_u, 0.0, 1e-15);
  EXPECT_NEAR(m.var_v, 0.05, 1e-15);
  EXPECT_NEAR(m.var_u, 0.05, 1e-15);
  EXPECT_NEAR(m.cov_uv, 0.0, 1e-15);
}

TEST(Moments, MatchIntegralsOfJointDensity) {
  const ModelParams m{-0.3, 1.2, 0.9, 1.4, 0.1};
  const JointLawParams jp{m, m.delta, -m.delta};
  const double ev = v_marginal_params(jp).a1 / v_marginal_params(jp).a2;
  auto moment = [&](int k, int l) {
    auto inner = [&](double t) {
      const auto [mu, var] = u_given_v(jp, t);
      // E[U^k | V = t] for a normal with mean mu and variance var.
      const double ek = k == 0 ? 1.0 : k == 1 ? mu : mu * mu + var;
      return ig_pdf(v_marginal_params(jp), t) * std::pow(t, l) * ek;
    };
    return integrate(inner, 0.0, ev, 1e-15).value + integrate(inner, ev, kInf, 1e-15).value;
  };
  const UVMoments c = closed_form_moments(m);
  const double ev1 = moment(0, 1), eu1 = moment(1, 0);
  EXPECT_NEAR(c.mean_v, ev1, 1e-12);
  EXPECT_NEAR(c.mean_u, eu1, 1e-12);
  EXPECT_NEAR(c.var_v, moment(0, 2) - ev1 * ev1, 1e-12);
  EXPECT_NEAR(c.var_u, moment(2, 0) - eu1 * eu1, 1e-12);
  EXPECT_NEAR(c.cov_uv, moment(1, 1) - ev1 * eu1, 1e-12);
}

TEST(Mgf, OriginAndIgReduction) {
  EXPECT_EQ(mgf_theta(kBase, {0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(mgf(kBase, {0.0, 0.0}), 1.0);
  const IGParams v = v_marginal_params({kBase, kBase.delta, -kBase.delta});
  for (double t = -1.0; t <= 0.0; t += 0.05) {
    EXPECT_NEAR(mgf(kBase, {0.0, t}), ig_mgf(v, t), 1e-10);
  }
}

TEST(Mgf, MatchesJointIntegral) {
  const ModelParams m{-0.3, 1.2, 0.9, 1.4, 0.1};
  const JointLawParams jp{m, m.delta, -m.delta};
  const IGParams v = v_marginal_params(jp);
  const double ev = v.a1 / v.a2;
  for (MgfArgument a : {MgfArgument{0.5, -0.2}, MgfArgument{-0.5, 0.1}, MgfArgument{0.2, 0.2}, MgfArgument{-1.0, -0.5}}) {
    ASSERT_GT(mgf_discriminant(m, a), 0.0);
    // E[e^{sU + tV}] = E[e^{tV} E[e^{sU} | V]].
    auto inner = [&](double t) {
      const auto [mu, var] = u_given_v(jp, t);
      return std::exp(log_ig_pdf(v, t) + a.t * t + a.s * mu + 0.5 * a.s * a.s * var);
    };
    const double want = integrate(inner, 0.0, ev, 1e-15).value + integrate(inner, ev, kInf, 1e-15).value;
    EXPECT_NEAR(mgf(m, a), want, 1e-10 * want) << "s = " << a.s << ", t = " << a.t;
  }
}

TEST(Mgf, OutsideDomainThrows) {
  EXPECT_THROW(mgf(kBase, {0.0, 100.0}), DomainError);
}
