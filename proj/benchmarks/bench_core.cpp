#include <benchmark/benchmark.h>

#include "spinnav/analysis.hpp"
#include "spinnav/dynamics.hpp"
#include "spinnav/navigator.hpp"
#include "spinnav/system.hpp"

using namespace spinnav;

namespace {

void BM_BuildHamiltonian(benchmark::State& state) {
  const SystemParams p{static_cast<int>(state.range(0)), 20.0, 5.0};
  double t = 0.0;
  for (auto _ : state) {
    auto h = build_hamiltonian(p, 50.0, t);
    benchmark::DoNotOptimize(h.diag.data());
    t += 1e-3;
  }
}
BENCHMARK(BM_BuildHamiltonian)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_CrossingGraph(benchmark::State& state) {
  const SystemParams p{static_cast<int>(state.range(0)), 20.0, 5.0};
  for (auto _ : state) {
    auto g = build_crossing_graph(p);
    benchmark::DoNotOptimize(g.edges.data());
  }
}
BENCHMARK(BM_CrossingGraph)->Arg(4)->Arg(64)->Arg(256);

void BM_PropagateScanPoint(benchmark::State& state) {
  // one point of the pulse-center scan
  const SystemParams p{4, 20.0, 5.0};
  Schedule s;
  s.pulses.push_back(Pulse::make_gaussian(50.0, 0.0, 1.0));
  const StateVector psi0 = basis_state(p, 0);
  PropagationOptions opts;
  opts.tol = static_cast<double>(state.range(0)) == 8 ? 1e-8 : 1e-10;
  for (auto _ : state) {
    auto r = propagate(p, s, psi0, opts);
    benchmark::DoNotOptimize(r.final_state.data());
  }
}
BENCHMARK(BM_PropagateScanPoint)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ReferencePropagation(benchmark::State& state) {
  const SystemParams p{static_cast<int>(state.range(0)), 20.0, 5.0};
  Schedule s;
  s.pulses.push_back(Pulse::make_gaussian(50.0, 0.0, 1.0));
  s.window = {{-5.0, 5.0}};
  const StateVector psi0 = basis_state(p, 0);
  for (auto _ : state) {
    auto r = propagate_reference(p, s, psi0, 1e-3);
    benchmark::DoNotOptimize(r.final_state.data());
  }
}
BENCHMARK(BM_ReferencePropagation)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_TwoLevelTransfer(benchmark::State& state) {
  const SystemParams p{1, 1.0, 1.0};
  Schedule s;
  s.pulses.push_back(Pulse::make_flattop(1.0, 0.0, 120.0, 1.0));
  s.window = {{-40.0, 40.0}};
  for (auto _ : state) {
    const double eff = transfer_efficiency(p, s, 0, 1, 1e-10);
    benchmark::DoNotOptimize(eff);
  }
}
BENCHMARK(BM_TwoLevelTransfer)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
