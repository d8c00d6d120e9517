#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cissir/cissir.hpp"
#include "support.hpp"

using namespace cissir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quantization noise coefficient") {
  CHECK(quant_noise_coeff(6) == 1.0 / 6144.0);
  CHECK_THAT(quant_noise_coeff(1), WithinRel(1.0 / 6.0, 1e-15));
  for (int q = 1; q < 16; ++q)
    CHECK_THAT(db10(quant_noise_coeff(q) / quant_noise_coeff(q + 1)), WithinAbs(6.0206, 1e-4));
  CHECK_THROWS_AS(quant_noise_coeff(0), std::invalid_argument);
}

TEST_CASE("transmit power and PAPR") {
  const Samples tone{cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  CHECK_THAT(tx_power({tone}), WithinRel(1.0, 1e-15));
  CHECK_THAT(tx_power({tone, tone}), WithinRel(2.0, 1e-15));
  CHECK(tx_power({Samples(4, cd(0, 0))}) == 0.0);
  CHECK_THAT(tx_power({tone}, 4e-9, 1e-9), WithinRel(1.0, 1e-15));
  CHECK_THAT(papr(tone), WithinRel(1.0, 1e-15));
  Samples spike(10, cd(0, 0));
  spike[3] = cd(0.0, 2.0);
  CHECK_THAT(papr(spike), WithinRel(10.0, 1e-15));
}

TEST_CASE("full scale") {
  const std::vector<Samples> y{{cd(0.1, 0.0), cd(0.0, -0.3)}, {cd(0.2, 0.1)}};
  CHECK_THAT(full_scale(y, 1.25), WithinRel(0.375, 1e-15));
  CHECK_THAT(full_scale(y, 2.5), WithinRel(0.75, 1e-15));
  CHECK(full_scale({Samples(3, cd(0, 0))}, 1.0) == 0.0);
}

TEST_CASE("noise bound") {
  NoiseBudget b;
  b.sigma_thermal_sq = 3e-12;
  b.k_chains = 2;
  CHECK_THAT(noise_bound(b, 0.0), WithinRel(6e-12, 1e-15));
  b.sigma_thermal_sq = 0.0;
  b.k_chains = 1;
  CHECK_THAT(noise_bound(b, from_db20(-60.0)), WithinRel(1e-6 / 6144.0, 1e-12));
}

TEST_CASE("SNR bound") {
  NoiseBudget b;
  b.sigma_thermal_sq = 1e-12;
  const double h = 1e-3, bw = 200e6;
  CHECK_THAT(snr_bound(b, 0.0, h, bw), WithinRel(h * b.p_tx / bw / b.sigma_thermal_sq, 1e-15));
  CHECK_THAT(snr_bound(b, 0.0, h, bw, 0.9), WithinRel(0.9 * snr_bound(b, 0.0, h, bw), 1e-15));
  // Quantization limited: transmit power cancels.
  b.sigma_thermal_sq = 0.0;
  NoiseBudget b2 = b;
  b2.p_tx = 2.0 * b.p_tx;
  CHECK_THAT(snr_bound(b2, 1e-4, h, bw), WithinRel(snr_bound(b, 1e-4, h, bw), 1e-15));
  CHECK(snr_bound(b, 1e-5, h, bw) > snr_bound(b, 1e-4, h, bw));
}

TEST_CASE("range CRLB") {
  CHECK_THAT(std::sqrt(crlb_range(100.0, 200e6)), WithinAbs(0.0413, 0.0001));
  CHECK_THAT(std::sqrt(crlb_range(400.0, 200e6)), WithinRel(0.5 * std::sqrt(crlb_range(100.0, 200e6)), 1e-14));
  CHECK_THAT(crlb_range(100.0, 400e6), WithinRel(0.25 * crlb_range(100.0, 200e6), 1e-14));
  CHECK_THROWS_AS(crlb_range(0.0, 1e6), std::invalid_argument);
}

TEST_CASE("target SI inverts the noise bound") {
  NoiseBudget b;
  b.adc_bits = 8;
  b.gamma = 1.3;
  b.p_tx = 0.5;
  b.papr_sum = 7.1;
  for (double m : {1e-7, 3e-5, 1e-3}) {
    const double s = noise_bound(b, m);
    CHECK_THAT(target_si(s, b, PaprEstimate::matched(b.papr_sum)), WithinRel(m, 1e-12));
  }
  const double avg = target_si(1e-9, b, PaprEstimate::average(5.0));
  const double q = target_si(1e-9, b, PaprEstimate::quantile(5.0, 0.5));
  CHECK_THAT(avg / q, WithinRel(std::sqrt(2.0), 1e-14));
  CHECK_THROWS_AS(target_si(1e-9, b, PaprEstimate::quantile(5.0, 0.0)), std::invalid_argument);
}

TEST_CASE("saturation split") {
  NoiseBudget b;
  SplitGrams g{CMat::Identity(3, 3), CMat::Identity(4, 4)};
  CHECK_THAT(beta_for_saturation(1e-6, b, g, 1e-6), WithinRel(1.0, 1e-14));
  CHECK_THAT(beta_for_saturation(4e-6, b, g, 1e-6), WithinRel(4.0, 1e-14));
  g.g_rx(2, 2) = 2.0;
  CHECK_THAT(beta_for_saturation(1e-6, b, g, 1e-6), WithinRel(0.5, 1e-14));
}

TEST_CASE("budget validation") {
  NoiseBudget b;
  b.gamma = 0.9;
  CHECK_THROWS_AS(noise_bound(b, 1e-3), std::invalid_argument);
  b.gamma = 1.0;
  b.k_chains = 0;
  CHECK_THROWS_AS(noise_bound(b, 1e-3), std::invalid_argument);
}
