#pragma once

#include <string>

namespace bgbm {

// The five model parameters. Drifts are per unit time, volatilities per
// sqrt(time), delta is the post-trade half-spread in log-price.
struct ModelParams {
  double mu_a = 0.0;
  double mu_b = 0.0;
  double sigma_a = 0.0;
  double sigma_b = 0.0;
  double delta = 0.0;

  // sigma_a^2 + sigma_b^2, the variance rate of the log spread.
  double total_variance() const { return sigma_a * sigma_a + sigma_b * sigma_b; }
  // mu_b - mu_a, the rate at which the unreflected log spread closes.
  double drift_gap() const { return mu_b - mu_a; }

  bool operator==(const ModelParams&) const = default;
};

// Throws DomainError naming the first violated invariant:
// mu_a < mu_b, sigma_a > 0, sigma_b > 0, delta > 0, all finite.
void validate(const ModelParams& p);

// Same checks, but allows sigma_a = sigma_b = 0 (deterministic drift-only
// paths) for the path builders.
void validate_allow_zero_volatility(const ModelParams& p);

std::string to_string(const ModelParams& p);

}  // namespace bgbm
