#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bgbm/parallel.hpp"
#include "bgbm/verify.hpp"

namespace bgbm::verify::detail {

inline unsigned threads_of(const VerifyConfig& cfg) {
  return cfg.threads == 0 ? default_thread_count() : cfg.threads;
}

inline std::size_t reps_or(const VerifyConfig& cfg, std::size_t fallback) {
  return cfg.reps == 0 ? fallback : cfg.reps;
}

// |estimate - target| <= tolerance.
inline CheckEntry near(std::string name, double target, double estimate, double tolerance) {
  return {std::move(name), target, estimate, tolerance, std::abs(estimate - target) <= tolerance};
}

// estimate < tolerance (target recorded for context).
inline CheckEntry below(std::string name, double target, double estimate, double tolerance) {
  return {std::move(name), target, estimate, tolerance, estimate < tolerance};
}

inline CheckEntry at_most(std::string name, double target, double estimate, double tolerance) {
  return {std::move(name), target, estimate, tolerance, estimate <= tolerance};
}

// Splits n items into fixed blocks; block b draws from substream b, so the
// numbers do not depend on the worker count.
template <typename Body>
void for_blocks(std::size_t n, std::size_t block, unsigned threads, Body&& body) {
  const std::size_t n_blocks = (n + block - 1) / block;
  parallel_for(n_blocks, threads, [&](std::size_t b) {
    const std::size_t begin = b * block;
    const std::size_t end = std::min(n, begin + block);
    body(b, begin, end);
  });
}

// Sum of per-block partial results in block order.
inline double ordered_sum(const std::vector<double>& parts) {
  double s = 0.0;
  for (double p : parts) s += p;
  return s;
}

}  // namespace bgbm::verify::detail
