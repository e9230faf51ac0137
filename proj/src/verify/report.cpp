#include <algorithm>
#include <string>
#include <vector>

#include "bgbm/errors.hpp"
#include "bgbm/verify.hpp"

namespace bgbm::verify {

bool SuiteReport::pass() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

namespace {

using SuiteFn = SuiteReport (*)(const VerifyConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"skorohod", skorohod_suite},
      {"rbm_law", rbm_law_suite},
      {"hitting_time", hitting_time_suite},
      {"lemma3_moments", lemma3_moments_suite},
      {"mgf", mgf_suite},
      {"theorem1", theorem1_suite},
      {"theorem2", theorem2_suite},
      {"ratio_moment", ratio_moment_suite},
      {"estimator", estimator_suite},
      {"densities", densities_suite},
      {"forecast", forecast_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg) {
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn(cfg);
  }
  std::string known;
  for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown suite '" + name + "' (known: " + known + ")");
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name},
                       {"target", e.target},
                       {"estimate", e.estimate},
                       {"tolerance", e.tolerance},
                       {"pass", e.pass}});
  }
  return {{"suite", r.suite}, {"pass", r.pass()}, {"entries", entries}};
}

}  // namespace bgbm::verify
