#include "bgbm/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bgbm/errors.hpp"

namespace bgbm {

double log_normal_cdf(double x) {
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x / kSqrt2));
  if (x > -30.0) return std::log(normal_cdf(x));
  // Phi(x) = phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...); eight terms
  // are below 1e-16 relative for x <= -30.
  const double inv2 = 1.0 / (x * x);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    series += term;
  }
  return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * kPi) + std::log(series);
}

double exp_times_normal_cdf(double a, double z) {
  if (a <= 30.0) return std::exp(a) * normal_cdf(z);
  return std::exp(a + log_normal_cdf(z));
}

namespace {

double pairwise_sum_impl(const double* p, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(p, half) + pairwise_sum_impl(p + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum_impl(xs.data(), xs.size());
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InsufficientDataError("mean of an empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw InsufficientDataError("variance needs at least 2 values");
  const double m = mean(xs);
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
  return pairwise_sum(sq) / static_cast<double>(xs.size() - 1);
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputShapeError("covariance: length mismatch");
  if (xs.size() < 2) throw InsufficientDataError("covariance needs at least 2 pairs");
  const double mx = mean(xs);
  const double my = mean(ys);
  std::vector<double> prod(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = (xs[i] - mx) * (ys[i] - my);
  return pairwise_sum(prod) / static_cast<double>(xs.size() - 1);
}

namespace {

// Central moments m2, m3, m4 with 1/n normalisation.
void central_moments(std::span<const double> xs, double& m2, double& m3, double& m4) {
  const double m = mean(xs);
  const std::size_t n = xs.size();
  std::vector<double> c2(n), c3(n), c4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - m;
    c2[i] = d * d;
    c3[i] = c2[i] * d;
    c4[i] = c2[i] * c2[i];
  }
  m2 = pairwise_sum(c2) / static_cast<double>(n);
  m3 = pairwise_sum(c3) / static_cast<double>(n);
  m4 = pairwise_sum(c4) / static_cast<double>(n);
}

}  // namespace

double skewness(std::span<const double> xs) {
  if (xs.size() < 3) throw InsufficientDataError("skewness needs at least 3 values");
  double m2, m3, m4;
  central_moments(xs, m2, m3, m4);
  if (m2 <= 0.0) throw DegenerateDataError("skewness of a constant sample");
  return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis(std::span<const double> xs) {
  if (xs.size() < 4) throw InsufficientDataError("kurtosis needs at least 4 values");
  double m2, m3, m4;
  central_moments(xs, m2, m3, m4);
  if (m2 <= 0.0) throw DegenerateDataError("kurtosis of a constant sample");
  return m4 / (m2 * m2) - 3.0;
}

double ks_statistic_sorted(std::span<const double> cdf_at_sorted) {
  const double n = static_cast<double>(cdf_at_sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf_at_sorted.size(); ++i) {
    const double f = cdf_at_sorted[i];
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InsufficientDataError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  for (auto& x : samples) x = cdf(x);
  return ks_statistic_sorted(samples);
}

namespace {

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

// One 21-point Kronrod rule with its embedded 10-point Gauss rule; the error
// is |K - G|.
Piece gk_piece(const std::function<double(double)>& g, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  static const auto& x = gauss_kronrod<double, 21>::abscissa();
  static const auto& wk = gauss_kronrod<double, 21>::weights();
  static const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  // x[0] is the centre; Gauss nodes are the odd-indexed Kronrod nodes.
  const double f0 = g(c);
  double k = wk[0] * f0, gs = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fs = g(c - h * x[i]) + g(c + h * x[i]);
    k += wk[i] * fs;
    if (i % 2 == 1) gs += wg[i / 2] * fs;
  }
  return {a, b, k * h, std::abs(k - gs) * h};
}

// f(x) * jacobian, taking the integrand as 0 once x runs off to infinity or
// f has underflowed, so the map's growing jacobian cannot produce inf * 0.
double mapped(const std::function<double(double)>& f, double x, double jacobian) {
  if (!std::isfinite(x)) return 0.0;
  const double v = f(x);
  return v == 0.0 ? 0.0 : v * jacobian;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, unsigned max_intervals) {
  if (a == b) return {0.0, 0.0};
  if (a > b) {
    const QuadratureResult r = integrate(f, b, a, abs_tol, rel_tol, max_intervals);
    return {-r.value, r.error};
  }
  // Infinite ranges are mapped onto finite ones in t; the GK nodes never
  // touch the endpoints, so the singular end of each map is not evaluated.
  std::function<double(double)> g;
  double lo = a, hi = b;
  const bool inf_a = std::isinf(a), inf_b = std::isinf(b);
  if (inf_a && inf_b) {
    g = [&f](double t) {
      const double d = 1.0 - t * t;
      return mapped(f, t / d, (1.0 + t * t) / (d * d));
    };
    lo = -1.0;
    hi = 1.0;
  } else if (inf_b) {
    g = [&f, a](double t) {
      const double d = 1.0 - t;
      return mapped(f, a + t / d, 1.0 / (d * d));
    };
    lo = 0.0;
    hi = 1.0;
  } else if (inf_a) {
    g = [&f, b](double t) {
      const double d = 1.0 - t;
      return mapped(f, b - t / d, 1.0 / (d * d));
    };
    lo = 0.0;
    hi = 1.0;
  } else {
    g = f;
  }

  // Globally adaptive: always bisect the piece with the largest error.
  std::vector<Piece> heap{gk_piece(g, lo, hi)};
  double value = heap.front().value;
  double error = heap.front().error;
  auto done = [&] { return error <= std::max(abs_tol, rel_tol * std::abs(value)); };
  while (!done() && heap.size() < max_intervals) {
    std::pop_heap(heap.begin(), heap.end());
    const Piece worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    const Piece left = gk_piece(g, worst.a, mid);
    const Piece right = gk_piece(g, mid, worst.b);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    // Re-sum rather than update in place so rounding does not accumulate.
    value = 0.0;
    error = 0.0;
    for (const Piece& p : heap) {
      value += p.value;
      error += p.error;
    }
  }
  if (!std::isfinite(value) || !done()) {
    throw NumericalError("quadrature did not converge: error estimate " + std::to_string(error) +
                             " on value " + std::to_string(value),
                         error);
  }
  return {value, error};
}

}  // namespace bgbm
