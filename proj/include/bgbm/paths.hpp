#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bgbm/params.hpp"

namespace bgbm {

// Strictly increasing, finite times starting at 0.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> t);
  static TimeGrid uniform(double step, std::size_t n_steps);

  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }
  double back() const { return t_.back(); }
  std::span<const double> times() const { return t_; }

 private:
  std::vector<double> t_;
};

// One realization of the bouncing construction on a grid. x_a, x_b are the
// free log-price paths, l the regulator, y_a = x_a + l/2 and
// y_b = x_b - l/2 the mutually reflected log paths, a and b their
// exponentials.
struct BouncingPath {
  TimeGrid grid;
  std::vector<double> x_a, x_b, l, y_a, y_b, a, b;
};

// Running supremum of the negative part of x_a - x_b, evaluated on the grid:
// l[i] = max_{j <= i} max(x_b[j] - x_a[j], 0).
std::vector<double> skorohod_regulator(std::span<const double> x_a, std::span<const double> x_b);

// Exact Gaussian increments for the free paths, then the regulator and the
// reflected and exponentiated paths. Zero volatilities are allowed, which
// gives the deterministic drift-only construction.
BouncingPath build_bouncing_path(const ModelParams& params, double a0, double b0,
                                 const TimeGrid& grid, std::uint64_t seed);

// Human-readable descriptions of every violated path invariant; empty when
// the path is consistent. y_a - y_b >= 0 is checked up to rounding of the
// two additions that form y_a and y_b.
std::vector<std::string> check_invariants(const BouncingPath& path);

// Header `t,x_a,x_b,l,y_a,y_b,a,b`, one row per grid point, shortest
// round-trip decimal representation.
void write_path_csv(std::ostream& os, const BouncingPath& path);

struct RbmLawQuery {
  double x = 0.0;       // initial level, >= 0
  double y = 0.0;       // evaluation level, >= 0
  double t = 1.0;       // horizon, > 0
  double mu = 0.0;      // drift
  double sigma2 = 1.0;  // variance rate, > 0
};

// P(R(t) <= y | R(0) = x) for a reflected Brownian motion on [0, inf).
double rbm_transient_cdf(const RbmLawQuery& q);

// P(A(t)/B(t) <= y) for deterministic A(0) = a0 >= B(0) = b0; y >= 1.
double ratio_cdf(const ModelParams& params, double a0, double b0, double t, double y);

// kappa = 2 (mu_b - mu_a) / (sigma_a^2 + sigma_b^2), the power-law exponent
// of the stationary spread ratio.
double stationary_tail_exponent(const ModelParams& params);

// kappa * y^(-1-kappa) for y >= 1 and 0 below the support.
double stationary_ratio_density(const ModelParams& params, double y);

// Standardized first-passage CDF F(t; x, 0) of a unit-variance Brownian
// motion with drift -1 from x down to 0.
double first_passage_cdf(double x, double t);

struct QuadConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-12;
  // The integration range ends where the integrand falls below this.
  double tail_cutoff = 1e-12;
  unsigned max_intervals = 2000;
};

// E[(A(t)/B(t))^k] for A(0) = B(0). Finite t uses the first-passage integral
// in canonical time; t = +infinity gives the stationary limit, which exists
// only for k < kappa.
double ratio_moment(const ModelParams& params, int k, double t, const QuadConfig& quad = {});

}  // namespace bgbm
