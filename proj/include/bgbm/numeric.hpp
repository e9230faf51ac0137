#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bgbm {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// Standard normal CDF through erfc, which keeps full relative accuracy in
// the lower tail.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

// log Phi(x), finite for every finite x (Mills-ratio series below -30).
double log_normal_cdf(double x);

// exp(a) * Phi(z). For a > 30 the product is formed in log space, since
// exp(a) may overflow while Phi(z) underflows although the product is small.
double exp_times_normal_cdf(double a, double z);

// Sum with O(log n) error growth. The result depends only on the order of
// the input, which keeps Monte Carlo reductions reproducible.
double pairwise_sum(std::span<const double> xs);

double mean(std::span<const double> xs);
// Unbiased sample variance (n - 1 denominator), two-pass.
double variance(std::span<const double> xs);
double covariance(std::span<const double> xs, std::span<const double> ys);
double skewness(std::span<const double> xs);
double excess_kurtosis(std::span<const double> xs);

// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
// The input need not be sorted.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Same statistic when the CDF values at the sorted sample points are
// already known (cdf_at_sorted[i] = F(x_(i))).
double ks_statistic_sorted(std::span<const double> cdf_at_sorted);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// Globally adaptive 21-point Gauss-Kronrod integration on [a, b]; either
// bound may be infinite. Throws NumericalError carrying the achieved error
// estimate if it stays above max(abs_tol, rel_tol * |value|) once
// max_intervals pieces are in use.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-9, double rel_tol = 1e-12,
                           unsigned max_intervals = 2000);

}  // namespace bgbm
