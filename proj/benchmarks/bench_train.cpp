#include <benchmark/benchmark.h>

#include "retlab/binning.hpp"
#include "retlab/synth.hpp"
#include "retlab/train.hpp"

using namespace retlab;

namespace {

Cohort cohort_of(std::size_t n) {
  SynthConfig cfg;
  cfg.n_students = n;
  cfg.seed = 7;
  return synth_cohort(cfg);
}

void bm_bin_features(benchmark::State& state) {
  const Cohort cohort = cohort_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bin_features(cohort, 512));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_grow_tree(benchmark::State& state) {
  const Cohort cohort = cohort_of(static_cast<std::size_t>(state.range(0)));
  const BinnedDataset data = bin_features(cohort, 512);
  TrainConfig cfg;
  std::vector<double> margins(data.n_rows, 0.0);
  const GradientPair grad = logistic_gradients(data.labels, margins);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grow_tree(data, grad.g, grad.h, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_train_100_iterations(benchmark::State& state) {
  const Cohort cohort = cohort_of(static_cast<std::size_t>(state.range(0)));
  TrainConfig cfg;
  cfg.num_iterations = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_on_cohort(cohort, cfg));
  }
}

}  // namespace

BENCHMARK(bm_bin_features)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_grow_tree)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_train_100_iterations)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
