#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace lrlm {

struct SuiteOptions {
  std::uint64_t seed = 0;
  // When set, the suite writes <trace_dir>/<suite>.json.
  std::string trace_dir;
  int jobs = 1;
  // Monte-Carlo trials per grid point (accuracy suite).
  std::size_t trials = 10000;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  // Measured against predicted values; contains no timings.
  nlohmann::json report;
};

// termination, cost, appendix_a, optimal_k, accuracy, lambda, pairwise, multihop
const std::vector<std::string>& suite_names();

// Throws ConfigError for an unknown suite.
SuiteResult run_suite(std::string_view name, const SuiteOptions& options = {});

}  // namespace lrlm
