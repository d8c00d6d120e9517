#include "cissir/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dft.hpp"

namespace cissir {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double quantize_component(double v, double delta, double limit) {
  const double q = delta * (std::floor(v / delta) + 0.5);
  return std::clamp(q, -limit, limit);
}

}  // namespace

Samples quantize(const Samples& samples, const QuantizerConfig& cfg) {
  if (!cfg.enabled) return samples;
  if (cfg.bits < 1) throw std::invalid_argument("quantizer needs at least one bit");
  if (!(cfg.full_scale > 0.0)) throw std::invalid_argument("quantizer full scale must be positive");
  const double delta = 2.0 * cfg.full_scale / std::ldexp(1.0, cfg.bits);
  const double limit = cfg.full_scale - 0.5 * delta;
  Samples out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = cd(quantize_component(samples[i].real(), delta, limit),
                quantize_component(samples[i].imag(), delta, limit));
  return out;
}

Samples effective_response(const TappedSiChannel& channel, const CVec& rx_beam, const CVec& tx_beam,
                           double sample_interval) {
  if (rx_beam.size() != channel.rx_dim() || tx_beam.size() != channel.tx_dim())
    throw std::invalid_argument("beam and channel dimensions do not match");
  if (!(sample_interval > 0.0)) throw std::invalid_argument("sample interval must be positive");
  std::vector<std::pair<long, cd>> taps;
  long last = 0;
  for (const auto& t : channel.taps()) {
    const double idx = t.delay / sample_interval;
    const long i = std::lround(idx);
    if (std::abs(idx - static_cast<double>(i)) > 1e-6 * std::max(1.0, idx))
      throw std::invalid_argument("channel is not discretized on the sample grid");
    taps.emplace_back(i, rx_beam.dot(t.gain * tx_beam));
    last = std::max(last, i);
  }
  Samples h(static_cast<std::size_t>(last + 1), cd(0.0, 0.0));
  for (const auto& [i, v] : taps) h[static_cast<std::size_t>(i)] += v;
  return h;
}

Samples convolve(const Samples& x, const Samples& h) {
  if (x.empty() || h.empty()) return {};
  Samples y(x.size() + h.size() - 1, cd(0.0, 0.0));
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == cd(0.0, 0.0)) continue;
    for (std::size_t n = 0; n < x.size(); ++n) y[n + j] += h[j] * x[n];
  }
  return y;
}

Samples convolve_periodic(const Samples& x, const Samples& h) {
  const std::size_t n = x.size();
  Samples y(n, cd(0.0, 0.0));
  if (n == 0) return y;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == cd(0.0, 0.0)) continue;
    const std::size_t s = j % n;
    for (std::size_t i = 0; i < n; ++i) y[(i + s) % n] += h[j] * x[i];
  }
  return y;
}

ReceiveResult receive(const Samples& x, const TappedSiChannel& si, const TappedSiChannel& radar,
                      const CVec& rx_beam, const CVec& tx_beam, double sample_interval,
                      double sigma_thermal_sq, const QuantizerConfig& quant, std::uint64_t rng_seed,
                      bool periodic) {
  if (!(sigma_thermal_sq >= 0.0)) throw std::invalid_argument("thermal noise power must be nonnegative");
  const Samples h_si = effective_response(si, rx_beam, tx_beam, sample_interval);
  const Samples h_r = effective_response(radar, rx_beam, tx_beam, sample_interval);
  ReceiveResult out;
  if (periodic) {
    out.si = convolve_periodic(x, h_si);
    out.echo = convolve_periodic(x, h_r);
  } else {
    out.si = convolve(x, h_si);
    out.echo = convolve(x, h_r);
    const std::size_t len = std::max(out.si.size(), out.echo.size());
    out.si.resize(len, cd(0.0, 0.0));
    out.echo.resize(len, cd(0.0, 0.0));
  }
  out.clean.resize(out.si.size());
  for (std::size_t i = 0; i < out.clean.size(); ++i) out.clean[i] = out.si[i] + out.echo[i];

  out.noisy = out.clean;
  if (sigma_thermal_sq > 0.0) {
    std::mt19937_64 rng(splitmix64(rng_seed ^ 0x7e43a11ull));
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5 * sigma_thermal_sq));
    for (auto& v : out.noisy) {
      const double re = nd(rng);
      const double im = nd(rng);
      v += cd(re, im);
    }
  }
  out.noisy = quantize(out.noisy, quant);
  return out;
}

RangeProfile range_profile(const std::vector<Samples>& noisy_rx, const std::vector<Samples>& x,
                           const RangeProfileOptions& opt) {
  if (noisy_rx.empty() || noisy_rx.size() != x.size())
    throw std::invalid_argument("need one received block per transmitted symbol");
  if (opt.num_bins < 1 || opt.lag_offset < 0) throw std::invalid_argument("invalid range profile size");
  const int max_lag = opt.num_bins + opt.lag_offset;
  std::size_t longest = 0;
  for (const auto& s : x) longest = std::max(longest, s.size());
  if (longest == 0) throw std::invalid_argument("empty transmit symbol");
  int n2 = 1;
  while (static_cast<std::size_t>(n2) < longest + static_cast<std::size_t>(max_lag)) n2 *= 2;

  detail::Dft fy(n2, FFTW_FORWARD), fx(n2, FFTW_FORWARD), inv(n2, FFTW_BACKWARD);
  std::vector<cd> acc(static_cast<std::size_t>(max_lag), cd(0.0, 0.0));
  for (std::size_t s = 0; s < x.size(); ++s) {
    const Samples& xs = x[s];
    const Samples& ys = noisy_rx[s];
    double ex = 0.0;
    for (const auto& v : xs) ex += std::norm(v);
    if (!(ex > 0.0)) throw std::invalid_argument("zero-energy transmit symbol");
    std::fill(fy.data(), fy.data() + n2, cd(0.0, 0.0));
    std::fill(fx.data(), fx.data() + n2, cd(0.0, 0.0));
    std::copy_n(ys.begin(), std::min<std::size_t>(ys.size(), static_cast<std::size_t>(n2)), fy.data());
    std::copy(xs.begin(), xs.end(), fx.data());
    fy.run();
    fx.run();
    for (int k = 0; k < n2; ++k) inv.data()[k] = fy.data()[k] * std::conj(fx.data()[k]);
    inv.run();
    const double norm = 1.0 / (static_cast<double>(n2) * ex);
    for (int l = 0; l < max_lag; ++l) acc[static_cast<std::size_t>(l)] += inv.data()[l] * norm;
  }

  RangeProfile prof;
  std::vector<double> mag;
  for (int l = opt.lag_offset; l < max_lag; ++l) {
    prof.bins.push_back(kSpeedOfLight * (l - opt.lag_offset) * opt.sample_interval / 2.0);
    mag.push_back(std::abs(acc[static_cast<std::size_t>(l)]) / static_cast<double>(x.size()));
  }
  double ref = opt.reference_level;
  if (!(ref > 0.0)) ref = *std::max_element(mag.begin(), mag.end());
  for (double m : mag) prof.magnitude_db.push_back(m > 0.0 && ref > 0.0 ? std::max(db20(m / ref), -400.0) : -400.0);
  return prof;
}

double mean_power(const Samples& x) {
  if (x.empty()) return 0.0;
  double e = 0.0;
  for (const auto& v : x) e += std::norm(v);
  return e / static_cast<double>(x.size());
}

double measure_snr(const Samples& clean_echo, const Samples& noisy, const Samples& clean_total) {
  if (noisy.size() != clean_total.size() || clean_echo.size() != noisy.size())
    throw std::invalid_argument("signal lengths differ");
  const double ps = mean_power(clean_echo);
  if (ps == 0.0) return 0.0;
  double pn = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) pn += std::norm(noisy[i] - clean_total[i]);
  pn /= static_cast<double>(noisy.size());
  return pn > 0.0 ? ps / pn : std::numeric_limits<double>::infinity();
}

Samples cancel_known_si(const Samples& noisy, const Samples& predicted_si) {
  if (noisy.size() != predicted_si.size()) throw std::invalid_argument("signal lengths differ");
  Samples out(noisy.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) out[i] = noisy[i] - predicted_si[i];
  return out;
}

ProfileStats profile_stats(const RangeProfile& p, double target_range, double resolution,
                           double min_range) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  double fl = 0.0, pk = 0.0;
  int nf = 0, np = 0;
  for (std::size_t i = 0; i < p.bins.size(); ++i) {
    const double d = std::abs(p.bins[i] - target_range);
    const double v = from_db10(p.magnitude_db[i]);
    if (d <= 0.5 * resolution) {
      pk += v;
      ++np;
    } else if (d > 4.0 * resolution && p.bins[i] >= min_range) {
      fl += v;
      ++nf;
    }
  }
  if (np == 0 || nf == 0) throw std::invalid_argument("target or floor region outside the profile");
  return {db10(fl / nf), db10(pk / np)};
}

double response_energy(const Samples& h, double sample_interval) {
  double e = 0.0;
  for (const auto& v : h) e += std::norm(v);
  return e / sample_interval;
}

namespace {

Samples frame_of(const std::vector<Samples>& symbols, double amplitude) {
  Samples f;
  for (const auto& s : symbols)
    for (const auto& v : s) f.push_back(amplitude * v);
  return f;
}

Samples slice(const Samples& f, std::size_t start, std::size_t len) {
  Samples out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = f[(start + i) % f.size()];
  return out;
}

}  // namespace

double calibrate_zeta(const OfdmConfig& ofdm, const Samples& h_r) {
  const double e = response_energy(h_r, ofdm.sample_interval);
  if (!(e > 0.0)) throw std::invalid_argument("zero radar response");
  const Samples x = frame_of(gen_ofdm(ofdm), 1.0);
  const Samples y = convolve_periodic(x, h_r);
  return mean_power(y) * ofdm.bandwidth() / (mean_power(x) * e);
}

BeamPairSimResult simulate_beam_pair(const OfdmConfig& ofdm, const TappedSiChannel& si,
                                     const TappedSiChannel& radar, const CVec& rx_beam,
                                     const CVec& tx_beam, const BeamPairSimConfig& cfg) {
  ofdm.validate();
  const auto symbols = gen_ofdm(ofdm);
  const double amp = std::sqrt(cfg.p_tx);
  const Samples x = frame_of(symbols, amp);
  const auto L = static_cast<std::size_t>(ofdm.symbol_length());
  const std::size_t S = symbols.size();

  // Noise-free periodic frame, then per-symbol AGC, thermal noise and ADC.
  QuantizerConfig off{cfg.adc_bits, 1.0, false};
  const ReceiveResult rx = receive(x, si, radar, rx_beam, tx_beam, ofdm.sample_interval,
                                   cfg.sigma_thermal_sq, off, ofdm.rng_seed, true);

  BeamPairSimResult res;
  Samples noisy(x.size());
  double papr_acc = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const std::size_t b = s * L;
    const Samples si_w = slice(rx.si, b, L);
    Samples w = slice(rx.noisy, b, L);
    if (cfg.quantize) {
      const double fs = full_scale({si_w}, cfg.gamma);
      res.max_full_scale = std::max(res.max_full_scale, fs);
      if (fs > 0.0) w = quantize(w, {cfg.adc_bits, fs, true});
    }
    std::copy(w.begin(), w.end(), noisy.begin() + static_cast<std::ptrdiff_t>(b));
    const Samples echo_w = slice(rx.echo, b, L);
    const Samples clean_w = slice(rx.clean, b, L);
    res.snr.push_back(measure_snr(echo_w, w, clean_w));
    res.mean_echo_power += mean_power(echo_w);
    double pn = 0.0;
    for (std::size_t i = 0; i < L; ++i) pn += std::norm(w[i] - clean_w[i]);
    res.mean_noise_power += pn / static_cast<double>(L);
    papr_acc += papr(slice(x, b, L));
  }
  const double inv = 1.0 / static_cast<double>(S);
  res.mean_echo_power *= inv;
  res.mean_noise_power *= inv;
  res.mean_papr = papr_acc * inv;
  double acc = 0.0;
  for (double v : res.snr) acc += v;
  res.mean_snr = acc * inv;

  const Samples processed = cfg.cancel_si ? cancel_known_si(noisy, rx.si) : noisy;
  const auto max_lag = static_cast<std::size_t>(cfg.profile_bins + cfg.kernel_latency);
  std::vector<Samples> rx_blocks, tx_blocks;
  for (std::size_t s = 0; s < S; ++s) {
    rx_blocks.push_back(slice(processed, s * L, L + max_lag));
    tx_blocks.push_back(slice(x, s * L, L));
  }
  RangeProfileOptions po;
  po.sample_interval = ofdm.sample_interval;
  po.num_bins = cfg.profile_bins;
  po.lag_offset = cfg.kernel_latency;
  po.reference_level = 1.0;
  res.profile = range_profile(rx_blocks, tx_blocks, po);
  return res;
}

}  // namespace cissir
