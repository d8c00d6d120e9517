#pragma once

#include <cstdint>
#include <vector>

#include "cissir/budget.hpp"
#include "cissir/channel.hpp"

namespace cissir {

struct OfdmConfig {
  int num_subcarriers = 256;
  double subcarrier_spacing = 781.25e3;  // Hz
  int cyclic_prefix_samples = 256;
  int modulation_order = 64;             // 4, 16 or 64
  int num_symbols = 100;
  double sample_interval = 0.625e-9;     // s
  std::uint64_t rng_seed = 1;

  void validate() const;
  int fft_size() const;
  double bandwidth() const { return num_subcarriers * subcarrier_spacing; }
  int symbol_length() const { return fft_size() + cyclic_prefix_samples; }
};

// Per-symbol time-domain samples with cyclic prefix, unit mean power over the
// useful part of each symbol.
std::vector<Samples> gen_ofdm(const OfdmConfig& config);

// Frequency-domain QAM symbols of one OFDM symbol, in subcarrier order.
std::vector<cd> ofdm_symbol_qam(const OfdmConfig& config, int symbol_index);

struct QuantizerConfig {
  int bits = 6;
  double full_scale = 1.0;
  bool enabled = true;
};

Samples quantize(const Samples& samples, const QuantizerConfig& config);

// SISO response c^H S[i] w on the sample grid; index i holds delay i*T_S.
Samples effective_response(const TappedSiChannel& channel, const CVec& rx_beam,
                           const CVec& tx_beam, double sample_interval);

// Full linear convolution.
Samples convolve(const Samples& x, const Samples& h);

struct ReceiveResult {
  Samples clean;  // SI + echo
  Samples noisy;  // clean + thermal noise, quantized
  Samples echo;   // radar-only part of clean
  Samples si;     // SI-only part of clean
};

// Linear convolution by default (output length len(x) + len(h) - 1). With periodic
// set, x is treated as one period of a repeated transmission and the output has
// len(x) samples.
ReceiveResult receive(const Samples& x, const TappedSiChannel& si, const TappedSiChannel& radar,
                      const CVec& rx_beam, const CVec& tx_beam, double sample_interval,
                      double sigma_thermal_sq, const QuantizerConfig& quant, std::uint64_t rng_seed,
                      bool periodic = false);

// Circular convolution over one period of x.
Samples convolve_periodic(const Samples& x, const Samples& h);

struct RangeProfile {
  std::vector<double> bins;          // m
  std::vector<double> magnitude_db;
};

struct RangeProfileOptions {
  double sample_interval = 0.625e-9;
  int num_bins = 512;
  int lag_offset = 0;           // samples of fixed latency removed from the range axis
  double reference_level = 0.0; // dB reference amplitude; <= 0 means the profile's own peak
};

// Matched filter of each received block against its transmitted symbol,
// normalized by the symbol energy and averaged coherently over symbols.
RangeProfile range_profile(const std::vector<Samples>& noisy_rx, const std::vector<Samples>& x,
                           const RangeProfileOptions& options);

struct ProfileStats {
  double floor_db = 0.0;  // mean power over bins away from the target and the SI region
  double peak_db = 0.0;   // mean power over the target resolution cell
  double peak_over_floor_db() const { return peak_db - floor_db; }
};

// resolution is the range cell c/(2B). Bins closer than min_range are SI territory.
ProfileStats profile_stats(const RangeProfile& profile, double target_range, double resolution,
                           double min_range);

double measure_snr(const Samples& clean_echo, const Samples& noisy, const Samples& clean_total);

Samples cancel_known_si(const Samples& noisy, const Samples& predicted_si);

// Mean sample power.
double mean_power(const Samples& x);

struct BeamPairSimConfig {
  double p_tx = 1.0;                 // W
  double sigma_thermal_sq = 0.0;     // W
  int adc_bits = 6;
  double gamma = 1.0;
  bool quantize = true;
  bool cancel_si = false;
  int kernel_latency = 0;            // samples
  int profile_bins = 512;
};

struct BeamPairSimResult {
  std::vector<double> snr;           // per symbol
  double mean_snr = 0.0;
  double mean_echo_power = 0.0;      // W
  double mean_noise_power = 0.0;     // W, mean |noisy - clean|^2
  double mean_papr = 0.0;
  double max_full_scale = 0.0;
  RangeProfile profile;              // absolute: 0 dB is a unit-gain tap
};

// Transmit every symbol through the SI and radar channels with the given beams.
// Full-scale follows from each symbol's SI-only dry run.
BeamPairSimResult simulate_beam_pair(const OfdmConfig& ofdm, const TappedSiChannel& si,
                                     const TappedSiChannel& radar, const CVec& rx_beam,
                                     const CVec& tx_beam, const BeamPairSimConfig& config);

// zeta = E|y_r|^2 / (P_tx ||h_r||^2 / B) for the given response.
double calibrate_zeta(const OfdmConfig& ofdm, const Samples& h_r);

// Energy sum |h|^2 / T_S of the band-limited interpolant of a sampled response.
double response_energy(const Samples& h, double sample_interval);

// Mean PAPR over the generated symbols (useful part only).
double mean_papr(const OfdmConfig& config);

}  // namespace cissir
