#include "bgbm/params.hpp"

#include <cmath>
#include <sstream>

#include "bgbm/errors.hpp"

namespace bgbm {

namespace {

void check_common(const ModelParams& p) {
  if (!std::isfinite(p.mu_a) || !std::isfinite(p.mu_b) || !std::isfinite(p.sigma_a) ||
      !std::isfinite(p.sigma_b) || !std::isfinite(p.delta)) {
    throw DomainError("model parameters must be finite: " + to_string(p));
  }
  if (!(p.mu_a < p.mu_b)) {
    throw DomainError("mu_a < mu_b violated: " + to_string(p));
  }
  if (!(p.delta > 0.0)) throw DomainError("delta > 0 violated: " + to_string(p));
}

}  // namespace

void validate(const ModelParams& p) {
  check_common(p);
  if (!(p.sigma_a > 0.0)) throw DomainError("sigma_a > 0 violated: " + to_string(p));
  if (!(p.sigma_b > 0.0)) throw DomainError("sigma_b > 0 violated: " + to_string(p));
}

void validate_allow_zero_volatility(const ModelParams& p) {
  check_common(p);
  if (p.sigma_a < 0.0) throw DomainError("sigma_a >= 0 violated: " + to_string(p));
  if (p.sigma_b < 0.0) throw DomainError("sigma_b >= 0 violated: " + to_string(p));
}

std::string to_string(const ModelParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(mu_a=" << p.mu_a << ", mu_b=" << p.mu_b << ", sigma_a=" << p.sigma_a
     << ", sigma_b=" << p.sigma_b << ", delta=" << p.delta << ")";
  return os.str();
}

}  // namespace bgbm
