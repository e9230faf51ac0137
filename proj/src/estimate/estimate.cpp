#include "bgbm/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bgbm/dists.hpp"
#include "bgbm/errors.hpp"
#include "bgbm/numeric.hpp"

namespace bgbm {

namespace {

constexpr double kClamp = 1e-12;
constexpr std::size_t kMinFitPairs = 10;
constexpr std::size_t kMinStderrPairs = 100;

struct Pairs {
  std::vector<double> u, v;
};

Pairs select_pairs(const TradeSequence& seq, bool use_first) {
  const std::size_t start = use_first ? 0 : 1;
  Pairs p;
  if (seq.size() > start) {
    p.u.assign(seq.u().begin() + static_cast<std::ptrdiff_t>(start), seq.u().end());
    p.v.assign(seq.v().begin() + static_cast<std::ptrdiff_t>(start), seq.v().end());
  }
  return p;
}

double clamp_nonnegative(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -kClamp) return 0.0;
  throw NumericalError(std::string("fit: ") + what + " is negative", v);
}

struct FitCore {
  ModelParams theta;
  std::array<double, 4> y;
};

FitCore fit_core(double x1, double x2, double x3, double x4, double x5) {
  if (!(x1 > 0.0)) throw DegenerateDataError("fit: mean inter-trade time must be > 0");
  const double y1 = 2.0 * x2 / x1;
  const double y2 = (x3 - x1 * x1) / x1;
  const double y3 = (x4 - x2 * x2) / x1;
  const double y4 = (x5 - x1 * x2) / x1;
  if (!(y2 > 0.0)) throw DegenerateDataError("fit: inter-trade times have zero variance");

  const double disc = clamp_nonnegative(y1 * y1 - 4.0 * (y1 * y4 - y3) / y2, "drift discriminant");
  const double root = std::sqrt(disc);
  FitCore out;
  out.y = {y1, y2, y3, y4};
  ModelParams& th = out.theta;
  th.mu_a = 0.5 * (y1 - root);
  th.mu_b = 0.5 * (y1 + root);
  const double gap = th.mu_b - th.mu_a;
  if (!(gap > 0.0)) throw DegenerateDataError("fit: the two drift estimates coincide");
  th.sigma_a = std::sqrt(clamp_nonnegative((y4 - th.mu_a * y2) * gap, "ask variance"));
  th.sigma_b = std::sqrt(clamp_nonnegative((th.mu_b * y2 - y4) * gap, "bid variance"));
  th.delta = 0.5 * gap * x1;
  return out;
}

}  // namespace

SampleMoments sample_moments(const TradeSequence& seq, bool use_first) {
  const Pairs p = select_pairs(seq, use_first);
  const std::size_t n = p.v.size();
  if (n < 2) {
    throw InsufficientDataError("sample_moments: need at least 2 (u, v) pairs, got " +
                                std::to_string(n));
  }
  const auto [lo, hi] = std::minmax_element(p.v.begin(), p.v.end());
  if (*lo == *hi) throw DegenerateDataError("sample_moments: all inter-trade times are equal");

  std::vector<double> v2(n), u2(n), uv(n);
  for (std::size_t i = 0; i < n; ++i) {
    v2[i] = p.v[i] * p.v[i];
    u2[i] = p.u[i] * p.u[i];
    uv[i] = p.u[i] * p.v[i];
  }
  SampleMoments m;
  m.x1 = mean(p.v);
  m.x2 = mean(p.u);
  m.x3 = mean(v2);
  m.x4 = mean(u2);
  m.x5 = mean(uv);
  m.n = n;
  m.use_first = use_first;
  if (!(m.x3 - m.x1 * m.x1 > 0.0)) {
    throw DegenerateDataError("sample_moments: inter-trade times have zero variance");
  }
  return m;
}

SampleMoments population_moments(const ModelParams& params) {
  const UVMoments c = closed_form_moments(params);
  SampleMoments m;
  m.x1 = c.mean_v;
  m.x2 = c.mean_u;
  m.x3 = c.var_v + c.mean_v * c.mean_v;
  m.x4 = c.var_u + c.mean_u * c.mean_u;
  m.x5 = c.cov_uv + c.mean_u * c.mean_v;
  m.n = std::numeric_limits<std::size_t>::max();
  return m;
}

std::array<double, 3> well_definedness_terms(const SampleMoments& m) {
  const double y1 = 2.0 * m.x2 / m.x1;
  const double y2 = (m.x3 - m.x1 * m.x1) / m.x1;
  const double y3 = (m.x4 - m.x2 * m.x2) / m.x1;
  const double y4 = (m.x5 - m.x1 * m.x2) / m.x1;
  const double disc = y1 * y1 - 4.0 * (y1 * y4 - y3) / y2;
  const double root = std::sqrt(std::max(disc, 0.0));
  const double mu_a = 0.5 * (y1 - root);
  const double mu_b = 0.5 * (y1 + root);
  const double gap = mu_b - mu_a;
  return {disc, (y4 - mu_a * y2) * gap, (mu_b * y2 - y4) * gap};
}

EstimateResult fit(const SampleMoments& m) {
  if (m.n < kMinFitPairs) {
    throw InsufficientDataError("fit: need at least " + std::to_string(kMinFitPairs) +
                                " pairs, got " + std::to_string(m.n));
  }
  for (double x : {m.x1, m.x2, m.x3, m.x4, m.x5}) {
    if (!std::isfinite(x)) throw DegenerateDataError("fit: moments must be finite");
  }
  const FitCore core = fit_core(m.x1, m.x2, m.x3, m.x4, m.x5);
  EstimateResult r;
  r.theta_hat = core.theta;
  r.y = core.y;
  r.coeffs = {0.5 * (core.theta.mu_a + core.theta.mu_b), 0.25 * core.theta.total_variance()};
  r.n = m.n;
  r.moments = m;
  return r;
}

std::array<double, 5> asymptotic_stderr(const TradeSequence& seq, const EstimateResult& result) {
  const Pairs p = select_pairs(seq, result.moments.use_first);
  const std::size_t n = p.v.size();
  if (n < kMinStderrPairs) {
    throw InsufficientDataError("asymptotic_stderr: need at least " +
                                std::to_string(kMinStderrPairs) + " pairs, got " +
                                std::to_string(n));
  }

  std::array<std::vector<double>, 5> cols;
  for (auto& c : cols) c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cols[0][i] = p.v[i];
    cols[1][i] = p.u[i];
    cols[2][i] = p.v[i] * p.v[i];
    cols[3][i] = p.u[i] * p.u[i];
    cols[4][i] = p.u[i] * p.v[i];
  }
  Eigen::Matrix<double, 5, 5> sigma;
  std::array<double, 5> x{};
  for (int j = 0; j < 5; ++j) {
    x[j] = mean(cols[j]);
    for (int k = 0; k <= j; ++k) {
      sigma(j, k) = sigma(k, j) = covariance(cols[j], cols[k]);
    }
  }

  // Singularity is judged on the correlation matrix so that the very
  // different scales of v and u^2 do not matter.
  Eigen::Matrix<double, 5, 1> sd;
  for (int j = 0; j < 5; ++j) {
    if (!(sigma(j, j) > 0.0)) throw DegenerateDataError("asymptotic_stderr: a moment column is constant");
    sd(j) = std::sqrt(sigma(j, j));
  }
  const Eigen::Matrix<double, 5, 5> corr = sd.cwiseInverse().asDiagonal() * sigma * sd.cwiseInverse().asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> eig(corr, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 1e-12)) {
    throw DegenerateDataError("asymptotic_stderr: moment covariance matrix is singular");
  }

  auto theta_vec = [](const std::array<double, 5>& xs) {
    const ModelParams th = fit_core(xs[0], xs[1], xs[2], xs[3], xs[4]).theta;
    return Eigen::Matrix<double, 5, 1>(th.mu_a, th.mu_b, th.sigma_a, th.sigma_b, th.delta);
  };
  Eigen::Matrix<double, 5, 5> jac;
  for (int j = 0; j < 5; ++j) {
    const double h = 1e-6 * std::max(std::abs(x[j]), sd(j));
    auto up = x;
    auto dn = x;
    up[j] += h;
    dn[j] -= h;
    jac.col(j) = (theta_vec(up) - theta_vec(dn)) / (up[j] - dn[j]);
  }
  const Eigen::Matrix<double, 5, 5> cov = jac * sigma * jac.transpose() / static_cast<double>(n);
  std::array<double, 5> se{};
  for (int j = 0; j < 5; ++j) se[j] = std::sqrt(std::max(cov(j, j), 0.0));
  return se;
}

nlohmann::json to_json(const EstimateResult& r, const std::optional<FitWindow>& window) {
  nlohmann::json j;
  j["mu_a"] = r.theta_hat.mu_a;
  j["mu_b"] = r.theta_hat.mu_b;
  j["sigma_a"] = r.theta_hat.sigma_a;
  j["sigma_b"] = r.theta_hat.sigma_b;
  j["delta"] = r.theta_hat.delta;
  j["m"] = r.coeffs.m;
  j["s"] = r.coeffs.s;
  if (r.std_errors) {
    j["stderr"] = *r.std_errors;
  } else {
    j["stderr"] = nullptr;
  }
  j["n"] = r.n;
  if (window) {
    j["window"] = {{"start_s", window->start_s}, {"end_s", window->end_s}};
  } else {
    j["window"] = nullptr;
  }
  return j;
}

}  // namespace bgbm
