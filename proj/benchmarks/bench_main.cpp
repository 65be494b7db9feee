#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/correlators.hpp"
#include "qcorr/dynamics.hpp"
#include "qcorr/measures.hpp"

namespace {

using namespace qcorr;

void BM_CorrelatorSet(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(correlator_set(ModelPoint::xy(0.7, 0.7, r)));
  }
}
BENCHMARK(BM_CorrelatorSet)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

std::vector<XState> sample_states() {
  std::mt19937_64 rng(7);
  std::vector<XState> states(256);
  for (auto& s : states) s = random_xstate(rng);
  return states;
}

void BM_DiscordAnalytic(benchmark::State& state) {
  const auto states = sample_states();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(discord_analytic(states[i++ % states.size()]));
  }
}
BENCHMARK(BM_DiscordAnalytic);

void BM_DiscordNumeric(benchmark::State& state) {
  const auto states = sample_states();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(discord_numeric(states[i++ % states.size()]));
  }
}
BENCHMARK(BM_DiscordNumeric)->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  const auto kind = static_cast<ChannelKind>(state.range(0));
  const XState x0 = initial_state(ModelPoint::xy(0.7, 0.7));
  const std::vector<double> grid = uniform_grid(0.0, kDefaultPMax, kDefaultPPoints);
  for (auto _ : state) benchmark::DoNotOptimize(trajectory(x0, kind, grid));
}
BENCHMARK(BM_Trajectory)
    ->Arg(static_cast<int>(ChannelKind::PF))
    ->Arg(static_cast<int>(ChannelKind::AD))
    ->Unit(benchmark::kMillisecond);

void BM_DetectPsc(benchmark::State& state) {
  const XState x0 = initial_state(ModelPoint::xy(0.7, 0.7));
  for (auto _ : state) benchmark::DoNotOptimize(detect_p_sc(x0, ChannelKind::BPF));
}
BENCHMARK(BM_DetectPsc)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
