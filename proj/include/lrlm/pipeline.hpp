#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "lrlm/executor.hpp"
#include "lrlm/oracle.hpp"
#include "lrlm/planner.hpp"
#include "lrlm/taskgen.hpp"

namespace lrlm {

struct RunOptions {
  Strategy strategy;
  double alpha = default_alpha;
  int jobs = 1;
  std::size_t preview_budget = default_preview_budget;
};

struct RunResult {
  Detection detection;
  Plan plan;
  CostEstimate estimate;
  double predicted_accuracy = 0.0;
  std::string answer;
  Answer typed;
  ExecTrace trace;  // detection call first, then the execution
  double score_exact = 0.0;
  double score_f1 = 0.0;
};

// Detect, plan, estimate, execute, score.
RunResult run_instance(const TaskInstance& inst, Oracle& oracle, const RunOptions& options = {});

nlohmann::json run_document(const RunResult& r);

}  // namespace lrlm
