#include <benchmark/benchmark.h>

#include "retlab/shap.hpp"
#include "retlab/synth.hpp"
#include "retlab/train.hpp"

using namespace retlab;

namespace {

struct TrainedModel {
  Cohort cohort;
  Ensemble model;
};

const TrainedModel& fixture(int iterations) {
  static TrainedModel small = [] {
    SynthConfig scfg;
    scfg.n_students = 2000;
    scfg.seed = 7;
    TrainedModel f;
    f.cohort = synth_cohort(scfg);
    TrainConfig cfg;
    cfg.num_iterations = 100;
    f.model = train_on_cohort(f.cohort, cfg).model;
    return f;
  }();
  static TrainedModel large = [] {
    TrainedModel f;
    f.cohort = small.cohort;
    TrainConfig cfg;
    cfg.num_iterations = 500;
    f.model = train_on_cohort(f.cohort, cfg).model;
    return f;
  }();
  return iterations >= 500 ? large : small;
}

void bm_tree_shap_row(benchmark::State& state) {
  const TrainedModel& f = fixture(static_cast<int>(state.range(0)));
  std::size_t row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree_shap(f.model, f.cohort[row]));
    row = (row + 1) % f.cohort.size();
  }
}

void bm_tree_shap_batch_1000(benchmark::State& state) {
  const TrainedModel& f = fixture(static_cast<int>(state.range(0)));
  const Cohort head(f.cohort.begin(), f.cohort.begin() + 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tree_shap_batch(f.model, head));
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}

void bm_interaction_values_row(benchmark::State& state) {
  const TrainedModel& f = fixture(static_cast<int>(state.range(0)));
  std::size_t row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(interaction_values(f.model, f.cohort[row]));
    row = (row + 1) % f.cohort.size();
  }
}

}  // namespace

BENCHMARK(bm_tree_shap_row)->Arg(100)->Arg(500);
BENCHMARK(bm_tree_shap_batch_1000)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_interaction_values_row)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
