// SPDX-License-Identifier: Apache-2.0
//
// Serial reference search against the OpenMP level-synchronous search on the
// bundled puzzles. Both must visit the same number of states.

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aosd/pack_io.hpp"
#include "aosd/solver.hpp"

namespace {

const aosd::PuzzlePack& pack() {
  static const aosd::PuzzlePack p = aosd::load_pack(std::string(AOSD_SOURCE_DIR) + "/packs/basics.json");
  return p;
}

template <bool Parallel>
void solve(benchmark::State& state, const std::string& id) {
  const aosd::PuzzleDef& puzzle = *pack().find(id);
  std::size_t visited = 0;
  for (auto _ : state) {
    aosd::SolveResult r = Parallel ? aosd::enumerate_solutions(puzzle, puzzle.solver_caps)
                                   : aosd::enumerate_solutions_serial(puzzle, puzzle.solver_caps);
    visited = r.states_visited;
    benchmark::DoNotOptimize(r.solutions.data());
  }
  state.counters["states"] = static_cast<double>(visited);
  state.counters["states/s"] =
      benchmark::Counter(static_cast<double>(visited) * state.iterations(), benchmark::Counter::kIsRate);
#ifdef _OPENMP
  state.counters["threads"] = Parallel ? omp_get_max_threads() : 1;
#endif
}

void serial(benchmark::State& state, const std::string& id) { solve<false>(state, id); }
void parallel(benchmark::State& state, const std::string& id) { solve<true>(state, id); }

}  // namespace

#define AOSD_SOLVER_BENCH(id)                                                          \
  BENCHMARK_CAPTURE(serial, id, #id)->Unit(benchmark::kMillisecond);   \
  BENCHMARK_CAPTURE(parallel, id, #id)->Unit(benchmark::kMillisecond)

AOSD_SOLVER_BENCH(garage);
AOSD_SOLVER_BENCH(webshop);
AOSD_SOLVER_BENCH(thermostat);
AOSD_SOLVER_BENCH(library);
AOSD_SOLVER_BENCH(school);
AOSD_SOLVER_BENCH(arcade);

BENCHMARK_MAIN();
