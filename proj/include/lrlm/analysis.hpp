#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lrlm/planner.hpp"
#include "lrlm/profile.hpp"
#include "lrlm/task.hpp"

namespace lrlm {

// T(m) unrolled over the chunk sizes split() actually produces:
// T(0) = 0, T(m) = C(m + h) for m <= tau, else sum of T(chunk) + C_oplus(k).
// Summation order matches the executor, so the result is bit-identical to
// a measured run without pruning.
double cost_recurrence(std::size_t n, std::size_t k, std::size_t tau, const OracleProfile& profile,
                       std::size_t header_tokens = 0, ComposeOp op = ComposeOp::MergeCounts);

// (nk/tau) C(tau) + C_oplus(k) (nk - tau) / (tau (k - 1)).
double cost_closed_form(std::size_t n, std::size_t k, std::size_t tau,
                        const OracleProfile& profile, ComposeOp op = ComposeOp::MergeCounts);

// A(tau)^(nk/tau) * A_oplus^d; A_oplus^d when A(tau) == 1.
double accuracy_lower_bound(std::size_t n, std::size_t k, std::size_t tau, int d,
                            const OracleProfile& profile);

// (n/tau)^(log_k A(tau)) * A_oplus^d.
double accuracy_power_law(std::size_t n, std::size_t k, std::size_t tau, int d,
                          const OracleProfile& profile);

// A0 * rho^(n/K).
double direct_accuracy(std::size_t n, const OracleProfile& profile);

struct SweepResult {
  std::size_t argmin = 2;
  std::vector<std::pair<std::size_t, double>> table;  // (k, bound)
};

// Closed-form bound for every k in [2, k_max]; ties go to the smaller k.
SweepResult sweep_optimal_k(std::size_t n, std::size_t tau, const OracleProfile& profile,
                            std::size_t k_max, ComposeOp op = ComposeOp::NeuralConcat);

enum class Method { direct, lambda_rlm };
std::string_view to_string(Method m) noexcept;

struct ScalingRow {
  std::size_t n = 0;
  Method method = Method::direct;
  std::size_t trials = 0;
  // direct: answer correct. lambda_rlm: one uniformly chosen sub-query
  // (leaf) answered correctly.
  double empirical_accuracy = 0.0;
  double predicted = 0.0;
  double mean_calls = 0.0;
  double mean_cost = 0.0;
  // Whole answer equal to the ground truth.
  double exact_accuracy = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double lower_bound = 0.0;  // lambda_rlm only
  std::size_t k_star = 1;
  std::size_t tau_star = 0;
  int depth = 0;
};

struct ScalingConfig {
  TaskType task = TaskType::aggregate;
  std::vector<std::size_t> grid = {8000, 16000, 32000, 64000, 128000};
  std::size_t trials = 10000;
  OracleProfile profile;
  std::uint64_t seed = 0;
  Strategy strategy{StrategyKind::theorem_k2, 0};
  double alpha = default_alpha;
  int jobs = 1;
  // Direct baseline reads only the first K tokens instead of extrapolating.
  bool truncate = false;
};

// Wilson score interval at z = 1.96.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

// Two rows (direct, lambda_rlm) per grid point. Trials run in parallel with
// per-trial seeds derived from (seed, n, trial), so the rows do not depend
// on `jobs`.
std::vector<ScalingRow> simulate_scaling(const ScalingConfig& config);

std::string scaling_csv(const std::vector<ScalingRow>& rows);

struct RlmBaseline {
  std::size_t calls = 0;
  double cost = 0.0;
  std::string label = "model, not measurement";
};

// Cost model of the open-ended REPL loop: one call per turn over a
// 500-token history. Executes nothing.
RlmBaseline rlm_baseline_stub(std::size_t n, std::size_t turns, const OracleProfile& profile);

}  // namespace lrlm
