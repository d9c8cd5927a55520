#include <cmath>

#include "doctest.h"
#include "lrlm/analysis.hpp"
#include "lrlm/error.hpp"
#include "lrlm/rng.hpp"

using namespace lrlm;

namespace {

OracleProfile appendix() { return builtin_profile("appendix-a"); }

}  // namespace

TEST_CASE("recurrence base and symbolic cases") {
  const auto p = appendix();
  CHECK(cost_recurrence(1000, 4, 1000, p) == doctest::Approx(cost_of(p, 1000)));
  CHECK(cost_recurrence(4000, 4, 1000, p) == doctest::Approx(4 * cost_of(p, 1000)));
  CHECK(cost_recurrence(0, 4, 1000, p) == 0.0);
}

TEST_CASE("recurrence with a priced composition") {
  const auto p = appendix();
  const double c = compose_cost(p, 2, ComposeOp::NeuralConcat);
  REQUIRE(c > 0.0);
  CHECK(cost_recurrence(4000, 2, 1000, p, 0, ComposeOp::NeuralConcat) ==
        doctest::Approx(4 * cost_of(p, 1000) + 3 * c));
}

TEST_CASE("closed form at n = tau is C(tau) scaled by k") {
  const auto p = appendix();
  CHECK(cost_closed_form(1000, 3, 1000, p) == doctest::Approx(3 * cost_of(p, 1000)));
  CHECK(cost_closed_form(1000, 3, 1000, p) >= cost_recurrence(1000, 3, 1000, p));
}

TEST_CASE("property: closed form bounds the recurrence") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    OracleProfile p = appendix();
    p.c_oplus = rng.below(3) == 0 ? 0.0 : 0.01 * rng.unit();
    const std::size_t k = rng.between(2, 16);
    const std::size_t tau = rng.between(1, 5000);
    const double ratio = std::exp(std::log(10000.0) * rng.unit());
    const auto n = std::max<std::size_t>(tau, static_cast<std::size_t>(ratio * tau));
    for (auto op : {ComposeOp::MergeCounts, ComposeOp::NeuralConcat}) {
      const double rec = cost_recurrence(n, k, tau, p, 0, op);
      const double closed = cost_closed_form(n, k, tau, p, op);
      CHECK(rec <= closed * (1 + 1e-12));
    }
  }
}

TEST_CASE("accuracy lower bound") {
  OracleProfile p = appendix();
  p.A0 = 1.0;
  p.rho = 1.0;
  p.A_oplus = 0.9;
  CHECK(accuracy_lower_bound(8000, 2, 1000, 3, p) == doctest::Approx(0.729));
  p.A0 = 0.99;
  p.A_oplus = 1.0;
  CHECK(accuracy_lower_bound(2000, 2, 1000, 1, p) == doctest::Approx(std::pow(0.99, 4)));
}

TEST_CASE("direct accuracy halves every K log_rho(1/2) tokens") {
  OracleProfile p = appendix();
  const double half = static_cast<double>(p.K) * std::log(0.5) / std::log(p.rho);
  const double a = direct_accuracy(10000, p);
  CHECK(direct_accuracy(10000 + static_cast<std::size_t>(std::llround(half)), p) ==
        doctest::Approx(a / 2).epsilon(1e-3));
  CHECK(direct_accuracy(0, p) == doctest::Approx(p.A0));
}

TEST_CASE("power-law form equals A(tau)^log_k(n/tau) and dominates the product bound") {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    OracleProfile p = appendix();
    p.rho = 0.5 + 0.49 * rng.unit();
    p.A_oplus = 0.9 + 0.1 * rng.unit();
    const std::size_t k = rng.between(2, 16);
    const std::size_t tau = rng.between(100, 30000);
    const std::size_t n = tau * rng.between(1, 5000);
    const int d = ceil_log(n, tau, k);
    const double a = accuracy_at(p, static_cast<double>(tau));
    const double expected =
        std::pow(a, std::log(static_cast<double>(n) / tau) / std::log(static_cast<double>(k))) *
        std::pow(p.A_oplus, d);
    CHECK(accuracy_power_law(n, k, tau, d, p) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(accuracy_power_law(n, k, tau, d, p) >= accuracy_lower_bound(n, k, tau, d, p));
  }
}

TEST_CASE("k sweep") {
  const auto p = appendix();
  auto s = sweep_optimal_k(128000, 4000, p, 16);
  CHECK(s.argmin == 2);
  REQUIRE(s.table.size() == 15);
  for (std::size_t i = 1; i < s.table.size(); ++i) CHECK(s.table[i].second >= s.table[i - 1].second);

  OracleProfile free = p;
  free.c_oplus = 0.0;
  auto f = sweep_optimal_k(128000, 4000, free, 16);
  CHECK(f.argmin == 2);
  for (std::size_t i = 1; i < f.table.size(); ++i) CHECK(f.table[i].second > f.table[i - 1].second);
}

TEST_CASE("Wilson interval") {
  auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
  auto [z0, z1] = wilson_interval(0, 10);
  CHECK(z0 == doctest::Approx(0.0));
  CHECK(z1 > 0.0);
}

TEST_CASE("scaling simulation does not depend on thread count") {
  ScalingConfig cfg;
  cfg.profile = builtin_profile("scaling");
  cfg.grid = {8000, 20000};
  cfg.trials = 200;
  cfg.seed = 3;
  auto a = simulate_scaling(cfg);
  cfg.jobs = 4;
  auto b = simulate_scaling(cfg);
  CHECK(scaling_csv(a) == scaling_csv(b));
  REQUIRE(a.size() == 4);
  for (const auto& r : a) {
    CHECK(r.empirical_accuracy >= 0.0);
    CHECK(r.empirical_accuracy <= 1.0);
    CHECK(r.ci_low <= r.empirical_accuracy);
    CHECK(r.ci_high >= r.empirical_accuracy);
  }
  CHECK(a[0].method == Method::direct);
  CHECK(a[1].method == Method::lambda_rlm);
  CHECK(a[1].k_star == 2);
}

TEST_CASE("scaling rejects tasks without a generator") {
  ScalingConfig cfg;
  cfg.task = TaskType::classify;
  cfg.trials = 1;
  CHECK_THROWS_AS(simulate_scaling(cfg), ConfigError);
}

TEST_CASE("open-ended loop baseline is a labelled model") {
  const auto p = appendix();
  auto b = rlm_baseline_stub(100000, 8, p);
  CHECK(b.calls == 8);
  CHECK(b.label == "model, not measurement");
  CHECK(rlm_baseline_stub(100000, 16, p).cost == doctest::Approx(2 * b.cost));
}
