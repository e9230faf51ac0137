#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace bgbm::verify {

struct CheckEntry {
  std::string name;
  double target = 0.0;
  double estimate = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckEntry> entries;
  bool pass() const;
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  // Main replication count of the suite; 0 keeps the suite default.
  std::size_t reps = 0;
  // Tick size for the theorem2 suite.
  double delta = 0.01;
  // Worker threads; 0 uses default_thread_count(). Results do not depend
  // on it.
  unsigned threads = 0;
};

// skorohod, rbm_law, hitting_time, lemma3_moments, mgf, theorem1, theorem2,
// ratio_moment, estimator, densities, forecast.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Throws DomainError for an unknown name.
SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg);

nlohmann::json to_json(const SuiteReport& r);

// Individual suites.
SuiteReport skorohod_suite(const VerifyConfig& cfg);
SuiteReport rbm_law_suite(const VerifyConfig& cfg);
SuiteReport hitting_time_suite(const VerifyConfig& cfg);
SuiteReport lemma3_moments_suite(const VerifyConfig& cfg);
SuiteReport mgf_suite(const VerifyConfig& cfg);
SuiteReport theorem1_suite(const VerifyConfig& cfg);
SuiteReport theorem2_suite(const VerifyConfig& cfg);
SuiteReport ratio_moment_suite(const VerifyConfig& cfg);
SuiteReport estimator_suite(const VerifyConfig& cfg);
SuiteReport densities_suite(const VerifyConfig& cfg);
SuiteReport forecast_suite(const VerifyConfig& cfg);

}  // namespace bgbm::verify
