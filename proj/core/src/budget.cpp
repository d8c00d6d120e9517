#include "cissir/budget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cissir {

double quant_noise_coeff(int q_bits) {
  if (q_bits < 1) throw std::invalid_argument("ADC needs at least one bit");
  return (2.0 / 3.0) * std::ldexp(1.0, -2 * q_bits);
}

void NoiseBudget::validate() const {
  quant_noise_coeff(adc_bits);
  if (!(gamma >= 1.0)) throw std::invalid_argument("back-off gamma must be >= 1");
  if (!(p_tx >= 0.0) || !(papr_sum >= 0.0) || !(sigma_thermal_sq >= 0.0))
    throw std::invalid_argument("budget powers must be nonnegative");
  if (k_chains < 1) throw std::invalid_argument("need at least one RX chain");
}

double PaprEstimate::effective() const {
  if (!(value > 0.0)) throw std::invalid_argument("PAPR estimate must be positive");
  if (mode == PaprMode::Quantile) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
    return value / alpha;
  }
  return value;
}

double tx_power(const std::vector<Samples>& chains, double symbol_duration, double sample_interval) {
  if (!(symbol_duration > 0.0)) throw std::invalid_argument("symbol duration must be positive");
  double e = 0.0;
  for (const auto& x : chains)
    for (const auto& v : x) e += std::norm(v);
  return e * sample_interval / symbol_duration;
}

double tx_power(const std::vector<Samples>& chains) {
  double p = 0.0;
  for (const auto& x : chains) {
    if (x.empty()) continue;
    double e = 0.0;
    for (const auto& v : x) e += std::norm(v);
    p += e / static_cast<double>(x.size());
  }
  return p;
}

double papr(const Samples& x) {
  double peak = 0.0, e = 0.0;
  for (const auto& v : x) {
    peak = std::max(peak, std::norm(v));
    e += std::norm(v);
  }
  if (!(e > 0.0)) throw std::invalid_argument("PAPR of a zero signal is undefined");
  return peak * static_cast<double>(x.size()) / e;
}

double full_scale(const std::vector<Samples>& si_rx, double gamma) {
  if (!(gamma >= 1.0)) throw std::invalid_argument("back-off gamma must be >= 1");
  double peak = 0.0;
  for (const auto& y : si_rx)
    for (const auto& v : y) peak = std::max(peak, std::abs(v));
  return gamma * peak;
}

double noise_bound(const NoiseBudget& b, double max_si) {
  b.validate();
  return b.k_chains * b.sigma_thermal_sq +
         b.k_chains * b.p_tx * b.gamma * b.gamma * b.b_q() * max_si * max_si * b.papr_sum;
}

double snr_bound(const NoiseBudget& b, double max_si, double h_r_energy, double bandwidth,
                 double zeta) {
  b.validate();
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const double den = b.sigma_thermal_sq + b.gamma * b.gamma * b.b_q() * max_si * max_si * b.p_tx * b.papr_sum;
  return zeta * h_r_energy * b.p_tx / bandwidth / den;
}

double crlb_range(double snr, double bandwidth) {
  if (!(snr > 0.0) || !(bandwidth > 0.0)) throw std::invalid_argument("SNR and bandwidth must be positive");
  return kSpeedOfLight * kSpeedOfLight / (4.0 * snr * bandwidth * bandwidth * kPi * kPi / 3.0);
}

double target_si(double sigma_star_sq, const NoiseBudget& b, const PaprEstimate& est) {
  b.validate();
  if (!(sigma_star_sq >= 0.0)) throw std::invalid_argument("target noise power must be nonnegative");
  return std::sqrt(sigma_star_sq) / (b.gamma * std::sqrt(b.b_q() * b.p_tx * est.effective()));
}

double beta_for_saturation(double p_sat, const NoiseBudget& b, const SplitGrams& grams, double eps) {
  b.validate();
  if (!(p_sat > 0.0) || !(eps > 0.0)) throw std::invalid_argument("P_sat and eps must be positive");
  const double dmax = grams.g_rx.diagonal().real().maxCoeff();
  if (!(dmax > 0.0)) throw std::invalid_argument("RX gram has no positive diagonal entry");
  return p_sat / (b.gamma * b.gamma * b.p_tx * b.papr_sum * dmax) / eps;
}

}  // namespace cissir
