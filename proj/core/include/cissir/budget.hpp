#pragma once

#include <vector>

#include "cissir/split.hpp"
#include "cissir/types.hpp"

namespace cissir {

using Samples = std::vector<cd>;

double quant_noise_coeff(int q_bits);

struct NoiseBudget {
  int adc_bits = 6;
  double gamma = 1.0;
  double p_tx = 1.0;             // W
  double papr_sum = 1.0;         // sum of PAPRs over TX chains
  double sigma_thermal_sq = 0.0; // W
  int k_chains = 1;

  double b_q() const { return quant_noise_coeff(adc_bits); }
  void validate() const;
};

enum class PaprMode { Matched, Average, Quantile };

struct PaprEstimate {
  PaprMode mode = PaprMode::Matched;
  double value = 1.0;   // sum of PAPRs (Matched) or of expected PAPRs
  double alpha = 1.0;   // Quantile only

  static PaprEstimate matched(double papr_sum) { return {PaprMode::Matched, papr_sum, 1.0}; }
  static PaprEstimate average(double mean_papr_sum) { return {PaprMode::Average, mean_papr_sum, 1.0}; }
  static PaprEstimate quantile(double mean_papr_sum, double alpha) {
    return {PaprMode::Quantile, mean_papr_sum, alpha};
  }
  // rho-bar used for target selection
  double effective() const;
};

// (1/T) sum_l ||x_l||^2 with T the symbol duration; samples spaced by sample_interval.
double tx_power(const std::vector<Samples>& chains, double symbol_duration, double sample_interval);
// Mean sample power per chain summed over chains (T = n * T_S).
double tx_power(const std::vector<Samples>& chains);

double papr(const Samples& x);

double full_scale(const std::vector<Samples>& si_rx, double gamma);

// K sigma_T^2 + K P_tx gamma^2 b_Q m^2 sum(rho)
double noise_bound(const NoiseBudget& budget, double max_si);

double snr_bound(const NoiseBudget& budget, double max_si, double h_r_energy, double bandwidth,
                 double zeta = 1.0);

double crlb_range(double snr, double bandwidth);

// eps = sigma_star / (gamma sqrt(b_Q P_tx rho-bar))
double target_si(double sigma_star_sq, const NoiseBudget& budget, const PaprEstimate& papr_est);

// beta = P_sat / (gamma^2 P_tx sum(rho) max_m [G_rx]_mm) / eps
double beta_for_saturation(double p_sat, const NoiseBudget& budget, const SplitGrams& grams,
                           double eps);

}  // namespace cissir
