#include <benchmark/benchmark.h>

#include "eqobs/scenario.hpp"
#include "eqobs/verify.hpp"

namespace {

eqobs::VerifyOptions verify_options(const benchmark::State& state) {
  eqobs::VerifyOptions opt;
  static const char* groups[] = {"se2", "so3", "se3"};
  opt.group = groups[state.range(0)];
  opt.cases = 500;
  opt.seed = 1;
  return opt;
}

void BM_VerifyParallel(benchmark::State& state) {
  const auto opt = verify_options(state);
  for (auto _ : state) benchmark::DoNotOptimize(eqobs::verify_suite(opt));
  state.SetItemsProcessed(state.iterations() * opt.cases);
}

void BM_VerifySerial(benchmark::State& state) {
  const auto opt = verify_options(state);
  for (auto _ : state) benchmark::DoNotOptimize(eqobs::verify_suite_serial(opt));
  state.SetItemsProcessed(state.iterations() * opt.cases);
}

eqobs::ScenarioConfig sweep_base() {
  eqobs::ScenarioConfig cfg;
  cfg.duration = 2.0;
  cfg.log_every = 100;
  return cfg;
}

const std::vector<double> kGains{0.5, 1.0, 2.0, 4.0};

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = sweep_base();
  for (auto _ : state) benchmark::DoNotOptimize(eqobs::run_sweep(cfg, kGains, kGains));
  state.SetItemsProcessed(state.iterations() * 16);
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = sweep_base();
  for (auto _ : state) benchmark::DoNotOptimize(eqobs::run_sweep_serial(cfg, kGains, kGains));
  state.SetItemsProcessed(state.iterations() * 16);
}

}  // namespace

BENCHMARK(BM_VerifyParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifySerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
