#include <benchmark/benchmark.h>

#include "pintconv/bounds.hpp"
#include "pintconv/mgrit.hpp"
#include "pintconv/registry.hpp"

namespace {

using namespace pintconv;

void BM_StabilityEval(benchmark::State& state) {
  const auto tab = scheme(state.range(0) ? "gauss4" : "sdirk33");
  cplx w{0.5, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(stability_eval(tab, w));
    w += 1e-9;
  }
}
BENCHMARK(BM_StabilityEval)->Arg(0)->Arg(1);

void BM_Sweep(benchmark::State& state) {
  const auto q = BoundQuery::make(scheme("sdirk22"), scheme("sdirk22"), static_cast<int>(state.range(0)),
                                  Relaxation::FCF);
  SweepOptions opt;
  opt.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sweep(q, opt).max_phi);
}
BENCHMARK(BM_Sweep)->Arg(2)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Cycle(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const MgritRun run{.hierarchy = TimeHierarchy::make(scheme("bwe"), scheme("bwe"), 1024, 1.0 / 1024, 2, levels),
                     .problem = make_spd_interval(1024.0, 64, 4.0),
                     .relaxation = RelaxationScheme::FCF};
  MgritSolver solver(run);
  for (auto _ : state) {
    state.PauseTiming();
    auto u = solver.initial_guess(1);
    state.ResumeTiming();
    benchmark::DoNotOptimize(solver.iterate(u, 1));
  }
}
BENCHMARK(BM_Cycle)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
