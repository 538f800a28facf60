#include <benchmark/benchmark.h>

#include "ptc/generator.hpp"
#include "ptc/heuristics.hpp"
#include "ptc/search.hpp"

namespace {

// First seed whose instance the scheduling-centric heuristic can complete,
// so every benchmark times the success path.
ptc::Instance preset(int n, int m, int f) {
  for (std::uint64_t seed = 7;; ++seed) {
    ptc::Instance inst = ptc::generate({n, m, f, ptc::ThresholdClass::Large, seed});
    if (ptc::schedule_centric(inst).schedule) return inst;
  }
}

void BM_Evaluate(benchmark::State& state) {
  const ptc::Instance inst = preset(static_cast<int>(state.range(0)), 4, 5);
  const ptc::SolveResult h = ptc::schedule_centric(inst);
  const ptc::ObjectiveSpec spec = ptc::ObjectiveSpec::lexDisqThenFlow();
  for (auto _ : state) benchmark::DoNotOptimize(ptc::evaluate(inst, *h.schedule, spec));
}
BENCHMARK(BM_Evaluate)->Arg(20)->Arg(70);

void BM_RootFlowBound(benchmark::State& state) {
  const ptc::Instance inst = preset(static_cast<int>(state.range(0)), 4, 5);
  const ptc::SearchModel model(inst);
  const ptc::SearchState root = model.root();
  for (auto _ : state) benchmark::DoNotOptimize(model.flow_lower_bound(root));
}
BENCHMARK(BM_RootFlowBound)->Arg(20)->Arg(70);

void BM_SchedulingCentric(benchmark::State& state) {
  const ptc::Instance inst = preset(static_cast<int>(state.range(0)), 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ptc::schedule_centric(inst));
}
BENCHMARK(BM_SchedulingCentric)->Arg(20)->Arg(70);

void BM_BranchAndBoundSmall(benchmark::State& state) {
  const ptc::Instance inst = preset(static_cast<int>(state.range(0)), 2, 2);
  ptc::SearchConfig cfg;
  cfg.timeLimitSeconds = 5;
  for (auto _ : state)
    benchmark::DoNotOptimize(ptc::solve(inst, ptc::ObjectiveSpec::lexDisqThenFlow(), cfg));
}
BENCHMARK(BM_BranchAndBoundSmall)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
