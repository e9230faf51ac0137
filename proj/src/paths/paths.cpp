#include "bgbm/paths.hpp"

#include <algorithm>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "bgbm/errors.hpp"
#include "bgbm/numeric.hpp"
#include "bgbm/rng.hpp"

namespace bgbm {

TimeGrid::TimeGrid(std::vector<double> t) : t_(std::move(t)) {
  if (t_.empty()) throw DomainError("time grid must not be empty");
  if (t_.front() != 0.0) throw DomainError("time grid must start at 0");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !(t_[i] > t_[i - 1])) {
      throw DomainError("time grid must be finite and strictly increasing (index " +
                        std::to_string(i) + ")");
    }
  }
}

TimeGrid TimeGrid::uniform(double step, std::size_t n_steps) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("grid step must be > 0");
  std::vector<double> t(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) t[i] = static_cast<double>(i) * step;
  return TimeGrid(std::move(t));
}

std::vector<double> skorohod_regulator(std::span<const double> x_a, std::span<const double> x_b) {
  if (x_a.size() != x_b.size()) {
    throw InputShapeError("skorohod_regulator: x_a has " + std::to_string(x_a.size()) +
                          " points, x_b has " + std::to_string(x_b.size()));
  }
  std::vector<double> l(x_a.size());
  double running = 0.0;
  for (std::size_t i = 0; i < x_a.size(); ++i) {
    running = std::max(running, std::max(-(x_a[i] - x_b[i]), 0.0));
    l[i] = running;
  }
  return l;
}

BouncingPath build_bouncing_path(const ModelParams& params, double a0, double b0,
                                 const TimeGrid& grid, std::uint64_t seed) {
  validate_allow_zero_volatility(params);
  if (!(a0 > 0.0) || !(b0 > 0.0)) throw DomainError("initial prices must be positive");
  if (a0 < b0) throw DomainError("initial ask must be >= initial bid");

  const std::size_t n = grid.size();
  BouncingPath path{grid, {}, {}, {}, {}, {}, {}, {}};
  path.x_a.resize(n);
  path.x_b.resize(n);
  path.x_a[0] = std::log(a0);
  path.x_b[0] = std::log(b0);

  Rng rng(seed);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = grid[i] - grid[i - 1];
    const double sq = std::sqrt(dt);
    const double za = rng.normal();
    const double zb = rng.normal();
    path.x_a[i] = path.x_a[i - 1] + params.mu_a * dt + params.sigma_a * sq * za;
    path.x_b[i] = path.x_b[i - 1] + params.mu_b * dt + params.sigma_b * sq * zb;
  }

  path.l = skorohod_regulator(path.x_a, path.x_b);
  path.y_a.resize(n);
  path.y_b.resize(n);
  path.a.resize(n);
  path.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    path.y_a[i] = path.x_a[i] + 0.5 * path.l[i];
    path.y_b[i] = path.x_b[i] - 0.5 * path.l[i];
    path.a[i] = std::exp(path.y_a[i]);
    path.b[i] = std::exp(path.y_b[i]);
  }
  return path;
}

std::vector<std::string> check_invariants(const BouncingPath& p) {
  std::vector<std::string> bad;
  const std::size_t n = p.grid.size();
  for (const auto* v : {&p.x_a, &p.x_b, &p.l, &p.y_a, &p.y_b, &p.a, &p.b}) {
    if (v->size() != n) {
      bad.push_back("series length differs from grid length");
      return bad;
    }
  }
  if (n == 0) return bad;
  if (p.l[0] != std::max(-(p.x_a[0] - p.x_b[0]), 0.0)) bad.push_back("l[0] is not the initial negative part");
  for (std::size_t i = 0; i < n; ++i) {
    const auto at = " at index " + std::to_string(i);
    if (i > 0 && p.l[i] < p.l[i - 1]) bad.push_back("l decreases" + at);
    if (p.y_a[i] != p.x_a[i] + 0.5 * p.l[i]) bad.push_back("y_a != x_a + l/2" + at);
    if (p.y_b[i] != p.x_b[i] - 0.5 * p.l[i]) bad.push_back("y_b != x_b - l/2" + at);
    const double slack =
        4.0 * DBL_EPSILON * (std::abs(p.x_a[i]) + std::abs(p.x_b[i]) + p.l[i]);
    if (p.y_a[i] - p.y_b[i] < -slack) bad.push_back("y_a < y_b" + at);
    if (p.a[i] != std::exp(p.y_a[i]) || p.b[i] != std::exp(p.y_b[i]))
      bad.push_back("a, b are not exp(y_a), exp(y_b)" + at);
    if (p.a[i] < p.b[i] * (1.0 - slack - 2.0 * DBL_EPSILON)) bad.push_back("a < b" + at);
    // The regulator may only grow at a grid point where the reflected
    // paths touch.
    if (i > 0 && p.l[i] > p.l[i - 1] && std::abs(p.y_a[i] - p.y_b[i]) > slack)
      bad.push_back("l increases while the paths are apart" + at);
  }
  return bad;
}

namespace {

void put_double(std::ostream& os, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

void write_path_csv(std::ostream& os, const BouncingPath& p) {
  os << "t,x_a,x_b,l,y_a,y_b,a,b\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double row[] = {p.grid[i], p.x_a[i], p.x_b[i], p.l[i], p.y_a[i], p.y_b[i], p.a[i], p.b[i]};
    for (std::size_t j = 0; j < 8; ++j) {
      if (j) os << ',';
      put_double(os, row[j]);
    }
    os << '\n';
  }
}

namespace {

// Floating-point cancellation in the CDF formulas is tolerated up to this
// far outside [0, 1].
constexpr double kClampWindow = 1e-12;

double clamp_probability(double v, const char* what) {
  if (v < 0.0 && v >= -kClampWindow) return 0.0;
  if (v > 1.0 && v <= 1.0 + kClampWindow) return 1.0;
  if (!(v >= 0.0 && v <= 1.0)) {
    throw NumericalError(std::string(what) + " left [0, 1] beyond the clamp window", v);
  }
  return v;
}

}  // namespace

double rbm_transient_cdf(const RbmLawQuery& q) {
  if (!(q.x >= 0.0)) throw DomainError("rbm_transient_cdf: x must be >= 0");
  if (!(q.y >= 0.0)) throw DomainError("rbm_transient_cdf: y must be >= 0");
  if (!(q.t > 0.0)) throw DomainError("rbm_transient_cdf: t must be > 0");
  if (!(q.sigma2 > 0.0)) throw DomainError("rbm_transient_cdf: sigma2 must be > 0");
  if (std::isinf(q.y)) return 1.0;
  const double sd = std::sqrt(q.sigma2 * q.t);
  const double z1 = (-q.y + q.x + q.mu * q.t) / sd;
  const double z2 = (-q.y - q.x - q.mu * q.t) / sd;
  // 1 - Phi(z1) is evaluated as Phi(-z1) to keep the upper tail accurate.
  const double v = normal_cdf(-z1) - exp_times_normal_cdf(2.0 * q.mu * q.y / q.sigma2, z2);
  return clamp_probability(v, "rbm_transient_cdf");
}

double ratio_cdf(const ModelParams& params, double a0, double b0, double t, double y) {
  validate(params);
  if (!(b0 > 0.0) || !(a0 >= b0)) throw DomainError("ratio_cdf: need a0 >= b0 > 0");
  if (!(y >= 1.0)) throw DomainError("ratio_cdf: the ask/bid ratio is >= 1, so y must be >= 1");
  return rbm_transient_cdf({std::log(a0 / b0), std::log(y), t, params.mu_a - params.mu_b,
                            params.total_variance()});
}

double stationary_tail_exponent(const ModelParams& params) {
  if (!(params.mu_a < params.mu_b)) {
    throw DomainError("stationary ratio law needs mu_a < mu_b: " + to_string(params));
  }
  return 2.0 * params.drift_gap() / params.total_variance();
}

double stationary_ratio_density(const ModelParams& params, double y) {
  const double kappa = stationary_tail_exponent(params);
  if (y < 1.0) return 0.0;
  return kappa * std::pow(y, -1.0 - kappa);
}

double first_passage_cdf(double x, double t) {
  if (!(x >= 0.0)) throw DomainError("first_passage_cdf: x must be >= 0");
  if (!(t > 0.0)) throw DomainError("first_passage_cdf: t must be > 0");
  if (std::isinf(t)) return 1.0;
  const double st = std::sqrt(t);
  const double v = normal_cdf((t - x) / st) + exp_times_normal_cdf(2.0 * x, (-t - x) / st);
  return clamp_probability(v, "first_passage_cdf");
}

double ratio_moment(const ModelParams& params, int k, double t, const QuadConfig& quad) {
  validate(params);
  if (k < 1) throw DomainError("ratio_moment: k must be a positive integer");
  if (!(t > 0.0)) throw DomainError("ratio_moment: t must be > 0");

  const double var = params.total_variance();
  const double gap = params.drift_gap();
  // c = 2 k mu_bar, where mu_bar = var / (2 gap) is the stationary mean of
  // the log spread.
  const double c = static_cast<double>(k) * var / gap;

  if (std::isinf(t)) {
    if (!(c < 2.0)) {
      throw DomainError("ratio_moment: stationary moment of order " + std::to_string(k) +
                        " is infinite (needs k < kappa = " +
                        std::to_string(stationary_tail_exponent(params)) + ")");
    }
    const auto r = integrate([c](double x) { return std::exp((c - 2.0) * x); }, 0.0,
                             std::numeric_limits<double>::infinity(), quad.abs_tol,
                             quad.rel_tol, quad.max_intervals);
    return 1.0 + c * r.value;
  }

  // F(.; x, 0) is the canonical first-passage law (drift -1, variance 1);
  // the spread runs on the clock gap^2 t / var in those units.
  const double tau = gap * gap * t / var;
  const double st = std::sqrt(tau);
  auto integrand = [c, tau, st](double x) {
    return exp_times_normal_cdf((c - 2.0) * x, (tau - x) / st) +
           exp_times_normal_cdf(c * x, (-tau - x) / st);
  };

  // The integrand is unimodal in x; walk out by doubling until it has
  // dropped below the cutoff on its decreasing side.
  double x_max = 1.0;
  double prev = integrand(0.0);
  double peak = prev;
  for (int it = 0;; ++it) {
    const double g = integrand(x_max);
    peak = std::max(peak, g);
    if (g < quad.tail_cutoff * std::max(1.0, peak) && g <= prev) break;
    if (it > 80) throw NumericalError("ratio_moment: integrand does not decay", g);
    prev = g;
    x_max *= 2.0;
  }

  // Split at the bulk of the mass so the adaptive rule sees the shoulder
  // near x ~ tau (1 + max(c - 2, 0)).
  const double knee = std::min(x_max, tau * (1.0 + std::max(c - 2.0, 0.0)));
  double total = 0.0;
  if (knee > 0.0 && knee < x_max) {
    total += integrate(integrand, 0.0, knee, quad.abs_tol, quad.rel_tol, quad.max_intervals).value;
    total += integrate(integrand, knee, x_max, quad.abs_tol, quad.rel_tol, quad.max_intervals).value;
  } else {
    total = integrate(integrand, 0.0, x_max, quad.abs_tol, quad.rel_tol, quad.max_intervals).value;
  }
  return 1.0 + c * total;
}

}  // namespace bgbm
