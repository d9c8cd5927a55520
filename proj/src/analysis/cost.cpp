#include <cmath>
#include <map>

#include "lrlm/analysis.hpp"
#include "lrlm/document.hpp"
#include "lrlm/error.hpp"
#include "lrlm/fix.hpp"

namespace lrlm {

double cost_recurrence(std::size_t n, std::size_t k, std::size_t tau, const OracleProfile& profile,
                       std::size_t header_tokens, ComposeOp op) {
  if (k < 2) throw InvalidSplit("cost_recurrence requires k >= 2");
  if (tau == 0) throw PlanInvalid("cost_recurrence requires tau >= 1");
  // At most two distinct sizes per level, so the memo stays tiny.
  std::map<std::size_t, double> memo;
  auto T = fix([&](const auto& self, std::size_t m) -> double {
    if (m == 0) return 0.0;
    if (m <= tau) return cost_of(profile, m + header_tokens);
    if (auto it = memo.find(m); it != memo.end()) return it->second;
    const std::size_t c = ceil_div(m, k);
    double t = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t b = std::min(i * c, m), e = std::min((i + 1) * c, m);
      t += self(e - b);
    }
    t += compose_cost(profile, k, op);
    memo.emplace(m, t);
    return t;
  });
  return T(n);
}

double cost_closed_form(std::size_t n, std::size_t k, std::size_t tau,
                        const OracleProfile& profile, ComposeOp op) {
  if (k < 2) throw InvalidSplit("cost_closed_form requires k >= 2");
  const double nd = static_cast<double>(n), kd = static_cast<double>(k),
               td = static_cast<double>(tau);
  const double leaves = nd * kd / td * cost_of(profile, tau);
  const double compose = compose_cost(profile, k, op) * ((nd * kd - td) / (td * (kd - 1.0)));
  return leaves + compose;
}

SweepResult sweep_optimal_k(std::size_t n, std::size_t tau, const OracleProfile& profile,
                            std::size_t k_max, ComposeOp op) {
  if (k_max < 2) throw InvalidSplit("sweep requires k_max >= 2");
  SweepResult r;
  double best = 0.0;
  for (std::size_t k = 2; k <= k_max; ++k) {
    const double v = cost_closed_form(n, k, tau, profile, op);
    r.table.emplace_back(k, v);
    if (k == 2 || v < best) {
      best = v;
      r.argmin = k;
    }
  }
  return r;
}

RlmBaseline rlm_baseline_stub(std::size_t /*n*/, std::size_t turns, const OracleProfile& profile) {
  if (turns == 0) throw ConfigError("rlm baseline needs at least one turn");
  RlmBaseline b;
  b.calls = turns;
  for (std::size_t t = 0; t < turns; ++t) b.cost += cost_of(profile, 500);
  return b;
}

}  // namespace lrlm
