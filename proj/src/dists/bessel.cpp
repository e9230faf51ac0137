#include <cmath>
#include <limits>

#include "bgbm/dists.hpp"
#include "bgbm/errors.hpp"

namespace bgbm {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kEps = 1e-17;

// K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!)
// with q = x^2/4.
double k1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;  // q^k / (k! (k+1)!)
  double psi_k1 = -kEulerGamma;       // psi(k+1)
  double psi_k2 = 1.0 - kEulerGamma;  // psi(k+2)
  double i1_sum = 0.0;
  double psi_sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    i1_sum += term;
    psi_sum += (psi_k1 + psi_k2) * term;
    const double next = term * q / ((k + 1.0) * (k + 2.0));
    psi_k1 += 1.0 / (k + 1.0);
    psi_k2 += 1.0 / (k + 2.0);
    term = next;
    if (term < kEps * i1_sum) break;
  }
  const double i1 = 0.5 * x * i1_sum;
  return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psi_sum;
}

// Steed's method on the continued fraction for K_{nu+1}/K_nu at nu = 0
// (Temme's CF2). Returns exp(x) K1(x).
double k1_scaled_cf(double x) {
  const double a1 = 0.25;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k0_scaled = std::sqrt(3.14159265358979323846 / (2.0 * x)) / s;
  return k0_scaled * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_k1(double z) {
  if (!(z > 0.0)) throw DomainError("bessel_k1: z must be > 0");
  if (std::isinf(z)) return 0.0;
  if (z <= 2.0) return k1_series(z);
  return k1_scaled_cf(z) * std::exp(-z);
}

double bessel_k1_scaled(double z) {
  if (!(z > 0.0)) throw DomainError("bessel_k1_scaled: z must be > 0");
  if (z <= 2.0) return k1_series(z) * std::exp(z);
  return k1_scaled_cf(z);
}

double bessel_k1_quadrature(double z) {
  if (!(z > 0.0)) throw DomainError("bessel_k1_quadrature: z must be > 0");
  // K1(z) = int_0^inf exp(-z cosh u) cosh u du. The integrand is analytic in
  // a strip around the real axis, so the trapezoidal rule converges
  // geometrically in 1/h.
  auto f = [z](double u) {
    const double ch = std::cosh(u);
    return std::exp(-z * ch) * ch;
  };
  auto trapezoid = [&](double h) {
    double sum = 0.5 * f(0.0);
    for (int j = 1;; ++j) {
      const double v = f(j * h);
      sum += v;
      if (v < 1e-30 * sum) break;
    }
    return sum * h;
  };
  double h = 0.5;
  double prev = trapezoid(h);
  for (int it = 0; it < 12; ++it) {
    h *= 0.5;
    const double cur = trapezoid(h);
    if (std::abs(cur - prev) <= 1e-15 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw NumericalError("bessel_k1_quadrature did not converge", prev);
}

}  // namespace bgbm
