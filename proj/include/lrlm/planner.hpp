#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lrlm/document.hpp"
#include "lrlm/oracle.hpp"
#include "lrlm/profile.hpp"
#include "lrlm/task.hpp"

namespace lrlm {

enum class StrategyKind { appendix_sqrt, theorem_k2, fixed };

struct Strategy {
  StrategyKind kind = StrategyKind::appendix_sqrt;
  std::size_t k = 0;  // fixed only
};

std::string to_string(const Strategy& s);
// appendix_sqrt | theorem_k2 | fixed:<k>
Strategy parse_strategy(std::string_view text);

inline constexpr double default_alpha = 0.80;

// Smallest d >= 0 with len * k^d >= n, i.e. ceil(log_k(n / len)).
int ceil_log(std::size_t n, std::size_t len, std::size_t k);
std::size_t ipow(std::size_t k, int d);

struct PlanParameters {
  std::size_t k_star = 1;
  std::size_t tau_star = 1;
  int depth = 0;            // ceil(log_k(n / tau))
  int depth_algorithm = 0;  // ceil(log_k(n / K))
  std::size_t loop_iterations = 0;
  std::vector<std::string> flags;
};

// n <= K gives (1, n, 0). Otherwise k from the strategy and
// tau = min(K - header_tokens, floor(n / k)); the leaf header always fits.
PlanParameters plan_parameters(std::size_t n, const OracleProfile& profile, double alpha,
                               Strategy strategy,
                               std::size_t header_tokens = max_leaf_header_tokens());

struct Plan {
  TaskType task = TaskType::aggregate;
  ComposeOp compose = ComposeOp::MergeCounts;
  std::vector<Stage> pipeline;
  std::size_t n = 0;
  std::size_t k_star = 1;
  std::size_t tau_star = 1;
  int depth = 0;
  int depth_algorithm = 0;
  Strategy strategy;
  double alpha = default_alpha;
  std::size_t header_tokens = 0;
  std::vector<std::string> flags;

  bool direct() const noexcept { return k_star == 1; }
};

Plan make_plan(TaskType task, std::size_t n, const OracleProfile& profile,
               double alpha = default_alpha, Strategy strategy = {});

// A plan with caller-chosen (k, tau), for experiments that sweep them.
Plan plan_with(TaskType task, std::size_t n, std::size_t k, std::size_t tau, const OracleProfile& profile);

// Throws PlanInvalid.
void validate_plan(const Plan& plan, std::size_t n, const OracleProfile& profile);

struct CostEstimate {
  double total = 0.0;
  double leaf_cost = 0.0;
  double composition_cost = 0.0;
  double detection_cost = 0.0;
  std::size_t leaf_calls = 0;
  std::size_t detection_calls = 1;
  std::size_t predicted_calls = 0;
};

// k^d * C(tau + h) + d * C_oplus(k) + C(detection prompt); zero oracle calls.
CostEstimate estimate_cost(const Plan& plan, std::size_t n, const OracleProfile& profile);

double estimate_accuracy(const Plan& plan, std::size_t n, const OracleProfile& profile);

// Tokens handed to the task detector: the head of P, at most 500 tokens
// and never more than the window leaves room for.
std::size_t detection_preview_length(std::size_t n, const OracleProfile& profile);

struct Detection {
  TaskType task = TaskType::aggregate;
  bool recognized = true;
  std::string raw;
  OracleCallRecord record;
  std::size_t prompt_tokens = 0;
};

// One oracle call over the preview; off-menu replies fall back to aggregate.
Detection detect_task(const Document& preview, std::size_t length, Oracle& oracle,
                      std::uint64_t index);

}  // namespace lrlm
