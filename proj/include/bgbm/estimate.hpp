#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "json.hpp"

#include "bgbm/params.hpp"
#include "bgbm/trading.hpp"

namespace bgbm {

// Averages of v, u, v^2, u^2, u v over the pairs used for fitting.
struct SampleMoments {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0, x5 = 0.0;
  std::size_t n = 0;
  // Whether the first pair (u = ln p_1, v = t_1) was included.
  bool use_first = false;
};

struct EstimateResult {
  ModelParams theta_hat;
  std::array<double, 4> y{};
  DiffusionCoefficients coeffs;
  std::optional<std::array<double, 5>> std_errors;
  std::size_t n = 0;
  SampleMoments moments;
};

// The first pair mixes a price level with increments and does not share the
// law of the later pairs unless the initial quotes sit at e^{+-delta}, so it
// is dropped unless use_first is set.
// Throws InsufficientDataError below 2 pairs and DegenerateDataError when
// all inter-trade times are equal.
SampleMoments sample_moments(const TradeSequence& seq, bool use_first = false);

// Raw moments of the stationary (U, V) law of `params`, tagged with a large
// n so they pass the sample-size guard of fit.
SampleMoments population_moments(const ModelParams& params);

// The three quantities that must be nonnegative for the fit to exist: the
// drift discriminant and the two variance products, before any clamping.
std::array<double, 3> well_definedness_terms(const SampleMoments& m);

// Closed-form method-of-moments fit. Quantities under square roots that come
// out in [-1e-12, 0) are clamped to 0; anything more negative throws
// NumericalError. Throws InsufficientDataError when n < 10 and
// DegenerateDataError when the moments violate their invariants or the drift
// estimates coincide.
EstimateResult fit(const SampleMoments& m);

// Delta-method standard errors of the five estimates: Sigma is the sample
// covariance of (v, u, v^2, u^2, u v), the Jacobian of the fit map comes from
// central differences at the observed moments. Needs n >= 100; throws
// DegenerateDataError when Sigma is singular.
std::array<double, 5> asymptotic_stderr(const TradeSequence& seq, const EstimateResult& result);

struct FitWindow {
  double start_s = 0.0;
  double end_s = 0.0;
};

// {mu_a, mu_b, sigma_a, sigma_b, delta, m, s, stderr, n, window}. stderr is
// null when not computed, window is null when not given.
nlohmann::json to_json(const EstimateResult& r, const std::optional<FitWindow>& window = {});

}  // namespace bgbm
