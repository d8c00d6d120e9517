#include <cmath>
#include <random>
#include <stdexcept>

#include "cissir/sensing.hpp"
#include "dft.hpp"

namespace cissir {

namespace {

std::mt19937_64 symbol_rng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream};
  return std::mt19937_64(seq);
}

}  // namespace

void OfdmConfig::validate() const {
  if (num_subcarriers < 1) throw std::invalid_argument("need at least one subcarrier");
  if (!(subcarrier_spacing > 0.0) || !(sample_interval > 0.0))
    throw std::invalid_argument("subcarrier spacing and sample interval must be positive");
  if (cyclic_prefix_samples < 0) throw std::invalid_argument("cyclic prefix must be nonnegative");
  if (modulation_order != 4 && modulation_order != 16 && modulation_order != 64)
    throw std::invalid_argument("modulation order must be 4, 16 or 64");
  if (num_symbols < 1) throw std::invalid_argument("need at least one symbol");
  const double n = 1.0 / (subcarrier_spacing * sample_interval);
  if (std::abs(n - std::round(n)) > 1e-3 * n)
    throw std::invalid_argument("sample interval is not a 1/N fraction of the symbol duration");
  if (std::round(n) < num_subcarriers)
    throw std::invalid_argument("sample rate below the occupied bandwidth");
  if (cyclic_prefix_samples > std::round(n)) throw std::invalid_argument("cyclic prefix longer than symbol");
}

int OfdmConfig::fft_size() const {
  return static_cast<int>(std::lround(1.0 / (subcarrier_spacing * sample_interval)));
}

std::vector<cd> ofdm_symbol_qam(const OfdmConfig& cfg, int symbol_index) {
  const int side = cfg.modulation_order == 4 ? 2 : cfg.modulation_order == 16 ? 4 : 8;
  const double norm = 1.0 / std::sqrt(2.0 * (cfg.modulation_order - 1) / 3.0);
  auto rng = symbol_rng(cfg.rng_seed, static_cast<std::uint64_t>(symbol_index), 0x51a1u);
  std::vector<cd> out(static_cast<std::size_t>(cfg.num_subcarriers));
  for (auto& s : out) {
    const auto i = static_cast<int>(rng() % side);
    const auto q = static_cast<int>(rng() % side);
    s = norm * cd(2.0 * i - side + 1, 2.0 * q - side + 1);
  }
  return out;
}

std::vector<Samples> gen_ofdm(const OfdmConfig& cfg) {
  cfg.validate();
  const int n = cfg.fft_size();
  const int nsc = cfg.num_subcarriers;
  const int cp = cfg.cyclic_prefix_samples;
  detail::Dft dft(n, FFTW_BACKWARD);
  const double scale = 1.0 / std::sqrt(static_cast<double>(nsc));
  std::vector<Samples> out;
  out.reserve(static_cast<std::size_t>(cfg.num_symbols));
  for (int s = 0; s < cfg.num_symbols; ++s) {
    const auto qam = ofdm_symbol_qam(cfg, s);
    cd* buf = dft.data();
    std::fill(buf, buf + n, cd(0.0, 0.0));
    // Occupied subcarriers centered on DC: k = -nsc/2 .. nsc - nsc/2 - 1.
    for (int i = 0; i < nsc; ++i) {
      const int k = i - nsc / 2;
      buf[(k % n + n) % n] = qam[static_cast<std::size_t>(i)];
    }
    dft.run();
    Samples sym(static_cast<std::size_t>(n + cp));
    for (int t = 0; t < n; ++t) sym[static_cast<std::size_t>(cp + t)] = scale * buf[t];
    for (int t = 0; t < cp; ++t) sym[static_cast<std::size_t>(t)] = sym[static_cast<std::size_t>(n + t)];
    out.push_back(std::move(sym));
  }
  return out;
}

double mean_papr(const OfdmConfig& cfg) {
  const auto syms = gen_ofdm(cfg);
  const auto cp = static_cast<std::ptrdiff_t>(cfg.cyclic_prefix_samples);
  double acc = 0.0;
  for (const auto& s : syms) acc += papr(Samples(s.begin() + cp, s.end()));
  return acc / static_cast<double>(syms.size());
}

}  // namespace cissir
