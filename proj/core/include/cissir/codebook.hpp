#pragma once

#include <string>
#include <vector>

#include "cissir/channel.hpp"
#include "cissir/types.hpp"

namespace cissir {

enum class Mode { Tapered, Phased };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// P x J beam matrix. Columns have unit norm; phased entries have modulus 1/sqrt(P).
class Codebook {
 public:
  Codebook(CMat entries, Mode mode);

  const CMat& entries() const { return entries_; }
  Mode mode() const { return mode_; }
  int antennas() const { return static_cast<int>(entries_.rows()); }
  int beams() const { return static_cast<int>(entries_.cols()); }
  CVec column(int j) const { return entries_.col(j); }

  // Same entries, other mode; throws if they violate the target mode.
  Codebook as_mode(Mode mode) const { return Codebook(entries_, mode); }

 private:
  CMat entries_;
  Mode mode_;
};

struct BeamPattern {
  std::vector<double> angles;    // deg
  std::vector<double> gains_db;
};

CVec steering_vector(const UlaGeometry& geometry, double azimuth_deg);

// Oversampled DFT beams with centers inside +-sector/2 (half-wavelength grid).
Codebook dft_reference(int P, int oversampling, double sector_deg, Mode mode = Mode::Phased);

// Beam-center azimuths of dft_reference, same order as its columns.
std::vector<double> dft_reference_angles(int P, int oversampling, double sector_deg);

// max over (k, l) of sum_i |c_k^H S[i] w_l|
double max_si(const Codebook& rx_cb, const Codebook& tx_cb, const TappedSiChannel& channel);

// Per-pair l1 SI amplitudes, K' x L'.
Eigen::MatrixXd si_matrix(const Codebook& rx_cb, const Codebook& tx_cb,
                          const TappedSiChannel& channel);

double codebook_deviation(const Codebook& cb, const Codebook& reference);

double frobenius_si(const Codebook& rx_cb, const Codebook& tx_cb, const CMat& flat_channel);

BeamPattern beam_gain_pattern(const Codebook& cb, int column, const UlaGeometry& geometry,
                              const std::vector<double>& angles, bool apply_element_pattern);

}  // namespace cissir
