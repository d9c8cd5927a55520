#include "lrlm/planner.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lrlm/error.hpp"

namespace lrlm {

std::string to_string(const Strategy& s) {
  switch (s.kind) {
    case StrategyKind::appendix_sqrt: return "appendix_sqrt";
    case StrategyKind::theorem_k2: return "theorem_k2";
    case StrategyKind::fixed: return "fixed:" + std::to_string(s.k);
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "appendix_sqrt") return {StrategyKind::appendix_sqrt, 0};
  if (text == "theorem_k2") return {StrategyKind::theorem_k2, 2};
  if (text.substr(0, 6) == "fixed:") {
    std::size_t k = 0;
    auto digits = text.substr(6);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && p == digits.data() + digits.size() && k >= 2)
      return {StrategyKind::fixed, k};
  }
  throw ConfigError("unknown strategy '" + std::string(text) +
                    "' (appendix_sqrt, theorem_k2, fixed:<k>=2..)");
}

int ceil_log(std::size_t n, std::size_t len, std::size_t k) {
  if (len == 0 || k < 2) throw PlanInvalid("ceil_log needs len >= 1 and k >= 2");
  int d = 0;
  // len * k^d, saturating.
  unsigned __int128 reach = len;
  while (reach < n) {
    reach *= k;
    ++d;
  }
  return d;
}

std::size_t ipow(std::size_t k, int d) {
  std::size_t out = 1;
  for (int i = 0; i < d; ++i) {
    if (out > std::numeric_limits<std::size_t>::max() / k) throw PlanInvalid("k^d overflows");
    out *= k;
  }
  return out;
}

PlanParameters plan_parameters(std::size_t n, const OracleProfile& profile, double alpha,
                               Strategy strategy, std::size_t header_tokens) {
  if (n < 1) throw PlanInvalid("n must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  PlanParameters out;
  const std::size_t K = profile.K;
  if (n <= K) {
    out.k_star = 1;
    out.tau_star = n;
    return out;
  }
  if (K <= header_tokens) throw PlanInvalid("window too small for the leaf header");

  std::size_t k = 2;
  if (strategy.kind == StrategyKind::fixed) {
    k = strategy.k;
  } else if (strategy.kind == StrategyKind::appendix_sqrt) {
    if (profile.c_oplus == 0.0) {
      out.flags.push_back("sqrt_rule_fallback_k2");
    } else {
      const double raw = std::sqrt(static_cast<double>(n) * profile.c_in / profile.c_oplus);
      k = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(raw)));
      // Accuracy target, verbatim: A(K)^d * A_oplus^d >= alpha while k < n / K.
      const double a_k = accuracy_at(profile, static_cast<double>(K));
      const double ratio = static_cast<double>(n) / static_cast<double>(K);
      auto meets = [&](int d) {
        return std::pow(a_k, d) * std::pow(profile.A_oplus, d) >= alpha;
      };
      int d = ceil_log(n, K, k);
      while (!meets(d) && static_cast<double>(k) < ratio) {
        ++k;
        d = ceil_log(n, K, k);
        ++out.loop_iterations;
      }
      if (!meets(d)) out.flags.push_back("InfeasibleAccuracy");
    }
  }
  if (k < 2) throw PlanInvalid("k must be >= 2 when n exceeds the window");
  if (k > n) throw PlanInvalid("k exceeds the number of tokens");

  out.k_star = k;
  out.tau_star = std::min(K - header_tokens, n / k);
  out.depth = ceil_log(n, out.tau_star, k);
  out.depth_algorithm = ceil_log(n, K, k);
  return out;
}

Plan make_plan(TaskType task, std::size_t n, const OracleProfile& profile, double alpha,
               Strategy strategy) {
  const auto row = lookup_plan(task);
  const auto params = plan_parameters(n, profile, alpha, strategy);
  Plan p;
  p.task = task;
  p.compose = row.compose;
  p.pipeline = row.pipeline;
  p.n = n;
  p.k_star = params.k_star;
  p.tau_star = params.tau_star;
  p.depth = params.depth;
  p.depth_algorithm = params.depth_algorithm;
  p.strategy = strategy;
  p.alpha = alpha;
  p.header_tokens = max_leaf_header_tokens();
  p.flags = params.flags;
  return p;
}

Plan plan_with(TaskType task, std::size_t n, std::size_t k, std::size_t tau,
               const OracleProfile& profile) {
  const auto row = lookup_plan(task);
  Plan p;
  p.task = task;
  p.compose = row.compose;
  p.pipeline = row.pipeline;
  p.n = n;
  p.k_star = k;
  p.tau_star = tau;
  p.strategy = {StrategyKind::fixed, k};
  p.header_tokens = max_leaf_header_tokens();
  if (k >= 2 && tau >= 1) {
    p.depth = ceil_log(n, tau, k);
    p.depth_algorithm = ceil_log(n, profile.K, k);
  }
  validate_plan(p, n, profile);
  return p;
}

void validate_plan(const Plan& plan, std::size_t n, const OracleProfile& profile) {
  if (plan.k_star < 1) throw PlanInvalid("k* must be >= 1");
  if (plan.tau_star < 1) throw PlanInvalid("tau* must be >= 1");
  if (plan.k_star == 1) {
    if (n > plan.tau_star) throw PlanInvalid("k* = 1 requires n <= tau*");
    if (n > profile.K) throw PlanInvalid("direct plan does not fit the window");
    return;
  }
  if (plan.tau_star + plan.header_tokens > profile.K)
    throw PlanInvalid("tau* plus leaf header exceeds the window K = " + std::to_string(profile.K));
}

std::size_t detection_preview_length(std::size_t n, const OracleProfile& profile) {
  const auto overhead = header_tokens(detection_header) + 1;
  const auto room = profile.K > overhead ? profile.K - overhead : 0;
  return std::min({n, detection_preview_tokens, room});
}

CostEstimate estimate_cost(const Plan& plan, std::size_t n, const OracleProfile& profile) {
  CostEstimate e;
  e.detection_cost =
      cost_of(profile, detection_prompt_tokens(detection_preview_length(n, profile), n));
  if (plan.direct() || plan.depth == 0) {
    e.leaf_calls = 1;
    e.leaf_cost = plan.direct() ? cost_of(profile, n) : cost_of(profile, n + plan.header_tokens);
  } else {
    e.leaf_calls = ipow(plan.k_star, plan.depth);
    e.leaf_cost = static_cast<double>(e.leaf_calls) *
                  cost_of(profile, plan.tau_star + plan.header_tokens);
    e.composition_cost =
        static_cast<double>(plan.depth) * compose_cost(profile, plan.k_star, plan.compose);
  }
  e.total = e.leaf_cost + e.composition_cost + e.detection_cost;
  e.predicted_calls = e.leaf_calls + e.detection_calls;
  return e;
}

double estimate_accuracy(const Plan& plan, std::size_t n, const OracleProfile& profile) {
  const double a_tau = accuracy_at(profile, static_cast<double>(plan.tau_star));
  if (plan.direct() || plan.depth == 0) return a_tau;
  // Deterministic composition of independent sub-queries.
  if (!is_neural(plan.compose)) return a_tau;
  const double a_op = compose_accuracy(profile, plan.compose);
  if (a_tau >= 1.0) return std::pow(a_op, plan.depth);
  const double leaves = static_cast<double>(n) * static_cast<double>(plan.k_star) /
                        static_cast<double>(plan.tau_star);
  return std::pow(a_tau, leaves) * std::pow(a_op, plan.depth);
}

Detection detect_task(const Document& preview, std::size_t length, Oracle& oracle,
                      std::uint64_t index) {
  const auto prompt = detection_prompt(preview, length);
  auto reply = oracle.call(prompt, index);
  Detection d;
  d.raw = reply.answer;
  d.record = reply.record;
  d.prompt_tokens = prompt.size();
  std::string_view name = d.raw;
  while (!name.empty() && (name.front() == ' ' || name.front() == '\n')) name.remove_prefix(1);
  while (!name.empty() && (name.back() == ' ' || name.back() == '\n')) name.remove_suffix(1);
  if (auto t = parse_task(name)) {
    d.task = *t;
  } else {
    d.task = TaskType::aggregate;
    d.recognized = false;
  }
  return d;
}

}  // namespace lrlm
