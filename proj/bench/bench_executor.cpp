#include <benchmark/benchmark.h>

#include "lrlm/analysis.hpp"
#include "lrlm/executor.hpp"
#include "lrlm/taskgen.hpp"

using namespace lrlm;

namespace {

struct Fixture {
  OracleProfile profile;
  TaskInstance inst;
  Plan plan;
};

// 512 leaves over a 512k-token aggregate document.
const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.profile = builtin_profile("scaling");
    x.profile.K = 1000 + max_leaf_header_tokens();
    x.inst = gen_aggregate(512000, 6, 1);
    x.plan = make_plan(TaskType::aggregate, x.inst.doc.size(), x.profile, default_alpha,
                       {StrategyKind::theorem_k2, 2});
    return x;
  }();
  return f;
}

void BM_phi_serial(benchmark::State& state) {
  const auto& f = fixture();
  SymbolicOracle o(f.profile);
  for (auto _ : state) benchmark::DoNotOptimize(execute_phi_serial(f.inst.doc, f.plan, o));
}
BENCHMARK(BM_phi_serial)->Unit(benchmark::kMillisecond);

void BM_phi_parallel(benchmark::State& state) {
  const auto& f = fixture();
  SymbolicOracle o(f.profile);
  ExecOptions opt;
  opt.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(execute_phi(f.inst.doc, f.plan, o, opt));
}
BENCHMARK(BM_phi_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_scaling(benchmark::State& state) {
  ScalingConfig cfg;
  cfg.profile = builtin_profile("scaling");
  cfg.trials = 1000;
  cfg.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_scaling(cfg));
}
BENCHMARK(BM_scaling)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
