#include <benchmark/benchmark.h>

#include "cissir/cissir.hpp"

using namespace cissir;

namespace {

struct Setup {
  TappedSiChannel channel;
  SplitGrams grams;
  Codebook tx, rx;
};

const Setup& setup() {
  static const Setup s = [] {
    const SiScenario sc = default_scenario();
    TappedSiChannel ch = discretize(build_si_channel(sc), 0.625e-9, 200e6);
    SplitGrams g = integral_split(ch);
    return Setup{ch, g, dft_reference(8, 4, 120.0), dft_reference(8, 4, 120.0)};
  }();
  return s;
}

void BM_IntegralSplit(benchmark::State& st) {
  const auto& s = setup();
  for (auto _ : st) benchmark::DoNotOptimize(integral_split(s.channel));
}
BENCHMARK(BM_IntegralSplit);

void BM_TaperedCodebookPair(benchmark::State& st) {
  const auto& s = setup();
  const Codebook tx = s.tx.as_mode(Mode::Tapered), rx = s.rx.as_mode(Mode::Tapered);
  const double eps = from_db20(static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(optimize_codebooks_tapered(s.grams, tx, rx, eps, 1.0));
}
BENCHMARK(BM_TaperedCodebookPair)->Arg(-90)->Arg(-70)->Unit(benchmark::kMillisecond);

void BM_PhasedColumn(benchmark::State& st) {
  const auto& s = setup();
  // Worst column, so the SDP is active rather than the reference shortcut.
  int worst = 0;
  for (int j = 1; j < s.tx.beams(); ++j)
    if (quad_form(s.grams.g_tx, s.tx.column(j)) > quad_form(s.grams.g_tx, s.tx.column(worst))) worst = j;
  const double eps = from_db20(-70.0);
  for (auto _ : st) benchmark::DoNotOptimize(solve_phased_column(s.tx.column(worst), s.grams.g_tx, eps));
}
BENCHMARK(BM_PhasedColumn)->Unit(benchmark::kMillisecond);

void BM_BeamPairSimulation(benchmark::State& st) {
  const auto& s = setup();
  const SiScenario sc = default_scenario();
  const TappedSiChannel radar = discretize(build_radar_channel(sc.tx_array, sc.rx_array, RadarTarget{}, 200e6),
                                           0.625e-9, 200e6);
  OfdmConfig ofdm;
  ofdm.num_symbols = static_cast<int>(st.range(0));
  BeamPairSimConfig cfg;
  cfg.kernel_latency = kernel_latency_samples();
  for (auto _ : st)
    benchmark::DoNotOptimize(simulate_beam_pair(ofdm, s.channel, radar, s.rx.column(3), s.tx.column(3), cfg));
}
BENCHMARK(BM_BeamPairSimulation)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
