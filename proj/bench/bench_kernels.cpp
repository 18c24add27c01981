// Timing comparison between the serial reference path and the OpenMP path of
// the data-parallel kernels. Both policies compute identical results (the
// unit suite checks that); this target measures what the parallel schedule
// buys on the two hot loops: candidate evaluation inside the depth search and
// per-cell trials inside the recovery-rate sweep.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "ltimd/experiments.hpp"
#include "ltimd/kernel_ident.hpp"
#include "ltimd/lti.hpp"
#include "ltimd/rng.hpp"
#include "ltimd/signals.hpp"

namespace {

using namespace ltimd;

Exec policy(const benchmark::State& state) {
  return state.range(0) != 0 ? Exec::Parallel : Exec::Serial;
}

IrregularSignal driven_record(const Complexity& cx, std::uint64_t seed,
                              Eigen::Index T) {
  const StateSpaceModel model = random_system(cx, derive_seed(seed, {1}));
  Rng rng(derive_seed(seed, {2}));
  const Eigen::VectorXd x0 = rng.uniform_vector(cx.n, -1.0, 1.0);
  const Eigen::MatrixXd u = rng.uniform_matrix(T, cx.m, -1.0, 1.0);
  return simulate(model, x0, u);
}

// Depth search over a record with randomly scattered gaps. The mask keeps
// roughly 70% of the entries, so most work is rank tests on the completable
// submatrix candidates — the loop the execution policy distributes.
void BM_IdentifyRandomGaps(benchmark::State& state) {
  const Complexity cx{0, 1, 2, 2};
  const auto T = static_cast<Eigen::Index>(state.range(1));
  const auto masked =
      apply_pattern(driven_record(cx, 4200, T), MissingPattern::random(0.3, 7));

  IdentOptions opts;
  opts.exec = policy(state);
  for (auto _ : state) {
    auto outcome = identify_exact(masked, cx, opts);
    benchmark::DoNotOptimize(outcome);
  }
  state.counters["threads"] = max_threads();
}

// Periodic output gaps of period ell+1 admit no complete window at the
// minimal depth, so the search runs several depths deep and the candidate
// lists grow accordingly. This is the heavy per-call shape.
void BM_IdentifyPeriodicGaps(benchmark::State& state) {
  const Complexity cx{1, 1, 3, 3};
  const auto masked = apply_pattern(driven_record(cx, 77, 90),
                                    MissingPattern::periodic_output(cx.ell + 1));

  IdentOptions opts;
  opts.exec = policy(state);
  for (auto _ : state) {
    auto outcome = identify_exact(masked, cx, opts);
    benchmark::DoNotOptimize(outcome);
  }
  state.counters["threads"] = max_threads();
}

// One sweep cell: n_systems * n_trials independent mask-and-identify trials,
// which is the loop the sweep parallelizes across.
void BM_SweepCell(benchmark::State& state) {
  SweepConfig cfg;
  cfg.n_systems = 5;
  cfg.n_trials = 8;
  cfg.T_grid = {60};
  cfg.given_fraction_grid = {0.5};
  cfg.seed = 11;
  cfg.exec = policy(state);

  for (auto _ : state) {
    auto table = run_fig1_sweep(cfg);
    benchmark::DoNotOptimize(table);
  }
  state.counters["threads"] = max_threads();
}

}  // namespace

BENCHMARK(BM_IdentifyRandomGaps)
    ->ArgNames({"par", "T"})
    ->Args({0, 120})
    ->Args({1, 120})
    ->Args({0, 240})
    ->Args({1, 240})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_IdentifyPeriodicGaps)
    ->ArgNames({"par"})
    ->Arg(0)
    ->Arg(1)
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_SweepCell)
    ->ArgNames({"par"})
    ->Arg(0)
    ->Arg(1)
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
