// Serial reference kernels vs their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "fefet/graph.hpp"
#include "fefet/memory.hpp"

using namespace fefet;

namespace {

std::vector<CellJob> make_jobs(std::size_t n) {
  std::vector<CellJob> jobs(n);
  for (std::size_t i = 0; i < n; ++i) jobs[i] = {i, static_cast<int>(i % 4)};
  return jobs;
}

void BM_RunCells(benchmark::State& state, bool parallel) {
  MemoryConfig cfg;
  cfg.device.n_domains = static_cast<int>(state.range(0));
  const MemoryModel model(cfg, 1);
  const auto jobs = make_jobs(4096);
  std::vector<CellOutcome> out(jobs.size());
  for (auto _ : state) {
    if (parallel)
      run_cells_parallel(model, jobs, out);
    else
      run_cells_serial(model, jobs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(jobs.size()));
}

void BM_GraphScore(benchmark::State& state, bool parallel) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const Graph golden = erdos_renyi(n, 0.02, false, 1);
  Bits bits = golden.to_bits();
  for (std::size_t i = 0; i < bits.size(); i += 997) bits[i] ^= 1;
  const Graph faulty = Graph::from_bits(n, bits);
  for (auto _ : state) {
    const double s = parallel ? graph_query_score(golden, faulty, 64, 1)
                              : graph_query_score_serial(golden, faulty, 64, 1);
    benchmark::DoNotOptimize(s);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_RunCells, serial, false)->Arg(50)->Arg(150)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunCells, parallel, true)->Arg(50)->Arg(150)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GraphScore, serial, false)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GraphScore, parallel, true)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
