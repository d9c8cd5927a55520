#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "lrlm/error.hpp"
#include "lrlm/planner.hpp"
#include "lrlm/rng.hpp"

using namespace lrlm;

namespace {

OracleProfile appendix() { return builtin_profile("appendix-a"); }

// Replies with a fixed string regardless of the prompt.
class Canned final : public Oracle {
 public:
  Canned(OracleProfile p, std::string reply) : Oracle(std::move(p)), reply_(std::move(reply)) {}
  std::string_view backend() const noexcept override { return "canned"; }

 protected:
  OracleReply do_call(const Document& prompt, std::uint64_t) override {
    return {reply_, priced(prompt.size(), 1)};
  }

 private:
  std::string reply_;
};

}  // namespace

TEST_CASE("ceil_log") {
  CHECK(ceil_log(10, 10, 2) == 0);
  CHECK(ceil_log(11, 10, 2) == 1);
  CHECK(ceil_log(131000, 26200, 5) == 1);
  CHECK(ceil_log(131000, 32000, 5) == 1);
  CHECK(ceil_log(1024000, 1000, 2) == 10);
  CHECK_THROWS_AS(ceil_log(10, 0, 2), PlanInvalid);
}

TEST_CASE("strategy names round-trip") {
  for (auto s : {"appendix_sqrt", "theorem_k2", "fixed:7"}) CHECK(to_string(parse_strategy(s)) == s);
  CHECK_THROWS_AS(parse_strategy("fixed:1"), ConfigError);
  CHECK_THROWS_AS(parse_strategy("greedy"), ConfigError);
}

TEST_CASE("131k-token aggregate plan") {
  const auto p = appendix();
  auto params = plan_parameters(131000, p, 0.8, {});
  CHECK(params.k_star == 5);
  CHECK(params.tau_star == 26200);
  CHECK(params.depth_algorithm == 1);
  CHECK(params.depth == 1);

  auto plan = make_plan(TaskType::aggregate, 131000, p, 0.8, {});
  auto est = estimate_cost(plan, 131000, p);
  CHECK(est.leaf_calls == 5);
  CHECK(est.predicted_calls == 6);
  CHECK(est.composition_cost == 0.0);
  CHECK(est.total == doctest::Approx(0.17).epsilon(0.03));
}

TEST_CASE("short input is a direct plan") {
  const auto p = appendix();
  for (auto s : {"appendix_sqrt", "theorem_k2", "fixed:4"}) {
    auto params = plan_parameters(2000, p, 0.8, parse_strategy(s));
    CHECK(params.k_star == 1);
    CHECK(params.tau_star == 2000);
    CHECK(params.depth == 0);
  }
  auto plan = make_plan(TaskType::aggregate, 2000, p);
  auto est = estimate_cost(plan, 2000, p);
  CHECK(est.predicted_calls == 2);
  CHECK(est.total ==
        doctest::Approx(cost_of(p, 2000) +
                        cost_of(p, detection_prompt_tokens(detection_preview_length(2000, p), 2000))));
  CHECK(estimate_accuracy(plan, 2000, p) == doctest::Approx(accuracy_at(p, 2000)));
}

TEST_CASE("binary split depth") {
  OracleProfile p = appendix();
  p.K = 1000 + max_leaf_header_tokens();
  auto params = plan_parameters(1024 * 1000, p, 0.8, {StrategyKind::theorem_k2, 2});
  CHECK(params.k_star == 2);
  CHECK(params.tau_star == 1000);
  CHECK(params.depth == 10);
}

TEST_CASE("accuracy estimate with a neural composition") {
  OracleProfile p = appendix();
  p.A0 = 1.0;
  p.rho = 1.0;
  p.A_oplus = 0.99;
  auto plan = plan_with(TaskType::summarise, 8000, 2, 1000, p);
  CHECK(plan.depth == 3);
  CHECK(estimate_accuracy(plan, 8000, p) == doctest::Approx(0.970299));
  // Symbolic composition: accuracy of a single leaf.
  auto agg = plan_with(TaskType::aggregate, 8000, 2, 1000, builtin_profile("appendix-a"));
  CHECK(estimate_accuracy(agg, 8000, builtin_profile("appendix-a")) ==
        doctest::Approx(accuracy_at(builtin_profile("appendix-a"), 1000)));
}

TEST_CASE("sqrt rule falls back to k = 2 without a composition price") {
  OracleProfile p = appendix();
  p.c_oplus = 0.0;
  auto params = plan_parameters(100000, p, 0.8, {});
  CHECK(params.k_star == 2);
  CHECK(params.flags == std::vector<std::string>{"sqrt_rule_fallback_k2"});
}

TEST_CASE("infeasible accuracy target is flagged, not looped forever") {
  OracleProfile p = appendix();
  p.rho = 0.1;
  p.A_oplus = 0.5;
  auto params = plan_parameters(1000000, p, 0.99, {});
  CHECK(std::find(params.flags.begin(), params.flags.end(), "InfeasibleAccuracy") !=
        params.flags.end());
  CHECK(params.loop_iterations <= ceil_div(1000000, p.K));
}

TEST_CASE("plan validation") {
  const auto p = appendix();
  CHECK_THROWS_AS(plan_with(TaskType::aggregate, 100000, 2, p.K, p), PlanInvalid);
  CHECK_THROWS_AS(plan_parameters(0, p, 0.8, {}), PlanInvalid);
  CHECK_THROWS_AS(plan_parameters(10, p, 0.0, {}), ConfigError);
  CHECK_THROWS_AS(plan_parameters(100000, p, 0.8, {StrategyKind::fixed, 200000}), PlanInvalid);
}

TEST_CASE("property: every plan is valid and its depth is tight") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    OracleProfile p = appendix();
    p.K = rng.between(64, 40000);
    p.rho = 0.5 + 0.49 * rng.unit();
    p.c_oplus = rng.below(2) ? 0.0 : 0.001 + 0.01 * rng.unit();
    const std::size_t n = rng.between(1, 2000000);
    const Strategy strategies[] = {{}, {StrategyKind::theorem_k2, 2},
                                   {StrategyKind::fixed, rng.between(2, 16)}};
    for (const auto& s : strategies) {
      if (s.kind == StrategyKind::fixed && s.k > n) continue;
      auto params = plan_parameters(n, p, 0.5 + 0.5 * rng.unit(), s);
      if (n <= p.K) {
        CHECK(params.k_star == 1);
        CHECK(params.tau_star == n);
        CHECK(params.depth == 0);
        continue;
      }
      REQUIRE(params.k_star >= 2);
      REQUIRE(params.tau_star >= 1);
      CHECK(params.tau_star + max_leaf_header_tokens() <= p.K);
      // n / tau <= k^d < n k / tau
      const double reach = std::pow(static_cast<double>(params.k_star), params.depth);
      const double ratio = static_cast<double>(n) / static_cast<double>(params.tau_star);
      CHECK(reach >= ratio - 1e-9);
      CHECK(reach < ratio * static_cast<double>(params.k_star) + 1e-9);
      CHECK(params.loop_iterations <= ceil_div(n, p.K));
      Plan plan = make_plan(TaskType::aggregate, n, p, 0.8, s);
      CHECK_NOTHROW(validate_plan(plan, n, p));
    }
  }
}

TEST_CASE("estimate is free and honest about call counts") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    OracleProfile p = appendix();
    const std::size_t n = rng.between(1, 500000);
    auto plan = make_plan(TaskType::aggregate, n, p, 0.8, {StrategyKind::theorem_k2, 2});
    auto e = estimate_cost(plan, n, p);
    CHECK(e.predicted_calls == e.leaf_calls + 1);
    if (!plan.direct()) CHECK(e.leaf_calls == ipow(plan.k_star, plan.depth));
    CHECK(e.total == doctest::Approx(e.leaf_cost + e.composition_cost + e.detection_cost));
  }
}

TEST_CASE("detection preview never exceeds 500 tokens or the window") {
  OracleProfile p = appendix();
  CHECK(detection_preview_length(100, p) == 100);
  CHECK(detection_preview_length(100000, p) == 500);
  p.K = 200;
  CHECK(detection_preview_length(100000, p) + header_tokens(detection_header) + 1 <= p.K);
}

TEST_CASE("detect_task") {
  auto doc = Document::from_text("Q1 label:abbr what is it ? Q2 label:desc why so ?");
  SUBCASE("menu answer") {
    Canned o(appendix(), " search\n");
    auto d = detect_task(doc, doc.size(), o, 0);
    CHECK(d.recognized);
    CHECK(d.task == TaskType::search);
  }
  SUBCASE("off-menu answer falls back") {
    Canned o(appendix(), "banana");
    auto d = detect_task(doc, doc.size(), o, 0);
    CHECK_FALSE(d.recognized);
    CHECK(d.task == TaskType::aggregate);
    CHECK(d.raw == "banana");
  }
  SUBCASE("symbolic reads the task off the text") {
    SymbolicOracle o(appendix());
    CHECK(detect_task(doc, doc.size(), o, 0).task == TaskType::aggregate);
  }
}
