#include <benchmark/benchmark.h>

#include <vector>

#include "brpf/alias_table.hpp"
#include "brpf/bernoulli_race.hpp"
#include "brpf/coin_factories.hpp"
#include "brpf/models/gaussian_ssm.hpp"
#include "brpf/models/sine_diffusion.hpp"
#include "brpf/particle_filter.hpp"

namespace {

using namespace brpf;

std::vector<double> random_weights(std::size_t n) {
  RandomStream s(1);
  std::vector<double> w(n);
  for (auto& x : w) x = 0.5 + s.uniform();
  return w;
}

void BM_AliasBuild(benchmark::State& state) {
  const auto w = random_weights(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(AliasTable(w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AliasBuild)->RangeMultiplier(10)->Range(1000, 100000)->Complexity();

void BM_AliasDraw(benchmark::State& state) {
  const AliasTable table(random_weights(1000));
  RandomStream s(2);
  for (auto _ : state) benchmark::DoNotOptimize(table.draw(s));
}
BENCHMARK(BM_AliasDraw);

void BM_RaceResample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  WeightFactorization f;
  f.constants = random_weights(n);
  f.coins.assign(n, Coin::with_probability(0.5));
  std::uint64_t round = 0;
  for (auto _ : state) benchmark::DoNotOptimize(race_resample(f, n, RandomStream(3, round++)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RaceResample)->RangeMultiplier(10)->Range(1000, 100000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_MultinomialResample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = random_weights(n);
  RandomStream s(4);
  for (auto _ : state) benchmark::DoNotOptimize(multinomial_resample(w, n, s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MultinomialResample)->RangeMultiplier(10)->Range(1000, 100000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_SinePgfCoin(benchmark::State& state) {
  const SineDiffusionParams p;
  const Coin coin = pgf_coin({0.0, 0.5, 1.0}, sine_coin_config(p.coin_shift, p.coin_rate));
  RandomStream s(5);
  for (auto _ : state) benchmark::DoNotOptimize(coin.flip(s));
}
BENCHMARK(BM_SinePgfCoin);

void BM_GaussianFilter(benchmark::State& state) {
  const GaussianSSMParams p;
  RandomStream data(6);
  const Dataset d = simulate_gaussian_dataset(p, 50, data);
  const GaussianSSM model(p, d.observations);
  FilterOptions options;
  options.particles = 100;
  options.strategy = static_cast<Strategy>(state.range(0));
  std::uint64_t run = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_filter(model, options, RandomStream(7, run++)));
  state.SetLabel(std::string(to_string(options.strategy)));
}
BENCHMARK(BM_GaussianFilter)
    ->Arg(static_cast<int>(Strategy::ewpf))
    ->Arg(static_cast<int>(Strategy::rwpf))
    ->Arg(static_cast<int>(Strategy::brpf))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
