// Runs every verification suite once, checks its entries and runtime budget,
// then reruns all suites with a different thread count and compares the JSON.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "bgbm/verify.hpp"

using namespace bgbm::verify;

namespace {

struct Criterion {
  int id;
  std::string suite;
  double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "skorohod", 30.0},        {2, "rbm_law", 120.0},     {3, "hitting_time", 120.0},
    {4, "lemma3_moments", 60.0},  {5, "mgf", 1.0},           {6, "theorem1", 120.0},
    {7, "theorem2", 120.0},       {8, "ratio_moment", 180.0}, {9, "estimator", 120.0},
    {10, "densities", 120.0},     {11, "forecast", 120.0},
};

void print_entries(const SuiteReport& r) {
  for (const auto& e : r.entries) {
    std::printf("    %-40s estimate=%-14.8g target=%-14.8g tol=%-12.6g %s\n", e.name.c_str(), e.estimate, e.target,
                e.tolerance, e.pass ? "ok" : "FAILED");
  }
}

}  // namespace

int main() {
  bool all = true;
  std::map<std::string, std::string> first_run;

  VerifyConfig cfg;
  cfg.seed = 1;
  cfg.threads = 1;
  for (const auto& c : kCriteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    SuiteReport r{c.suite, {}};
    try {
      r = run_suite(c.suite, cfg);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = error.empty() && r.pass() && in_time;
    all = all && pass;
    first_run[c.suite] = to_json(r).dump();
    std::printf("AC%d %s  suite=%s time=%.2fs budget=%.0fs%s%s\n", c.id, pass ? "PASS" : "FAIL", c.suite.c_str(),
                secs, c.budget_s, in_time ? "" : " (over budget)", error.empty() ? "" : (" error: " + error).c_str());
    print_entries(r);
    std::fflush(stdout);
  }

  // Determinism: same seed, different worker count, identical reports.
  VerifyConfig rerun = cfg;
  rerun.threads = 4;
  std::vector<std::string> differing;
  for (const auto& c : kCriteria) {
    std::string json;
    try {
      json = to_json(run_suite(c.suite, rerun)).dump();
    } catch (const std::exception& e) {
      json = std::string("error: ") + e.what();
    }
    if (json != first_run[c.suite]) differing.push_back(c.suite);
  }
  const bool det = differing.empty();
  all = all && det;
  std::string list;
  for (const auto& s : differing) list += " " + s;
  std::printf("AC12 %s  all suites rerun with threads=4 against threads=1%s%s\n", det ? "PASS" : "FAIL",
              det ? "" : ", differing:", list.c_str());
  return all ? 0 : 1;
}
