#include "cissir/codebook.hpp"

#include <cmath>
#include <stdexcept>

namespace cissir {

namespace {

void check_dims(const Codebook& rx_cb, const Codebook& tx_cb, long m, long n) {
  if (rx_cb.antennas() != m || tx_cb.antennas() != n)
    throw std::invalid_argument("codebook and channel dimensions do not match");
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::Tapered ? "tapered" : "phased"; }

Mode mode_from_string(const std::string& s) {
  if (s == "tapered") return Mode::Tapered;
  if (s == "phased") return Mode::Phased;
  throw std::invalid_argument("unknown codebook mode '" + s + "'");
}

Codebook::Codebook(CMat entries, Mode mode) : entries_(std::move(entries)), mode_(mode) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw std::invalid_argument("codebook must be nonempty");
  if (!entries_.allFinite()) throw std::invalid_argument("codebook has non-finite entries");
  for (Eigen::Index j = 0; j < entries_.cols(); ++j)
    if (std::abs(entries_.col(j).norm() - 1.0) > 1e-9)
      throw std::invalid_argument("codebook column " + std::to_string(j) + " is not unit norm");
  if (mode_ == Mode::Phased) {
    const double mod = 1.0 / std::sqrt(static_cast<double>(entries_.rows()));
    if ((entries_.array().abs() - mod).abs().maxCoeff() > 1e-9)
      throw std::invalid_argument("phased codebook entries must have modulus 1/sqrt(P)");
  }
}

CVec steering_vector(const UlaGeometry& geometry, double azimuth_deg) {
  const int P = geometry.num_elements;
  const double s = std::sin(azimuth_deg * kPi / 180.0) * geometry.element_spacing /
                   geometry.carrier_wavelength;
  CVec a(P);
  for (int p = 0; p < P; ++p) a(p) = std::polar(1.0, -2.0 * kPi * p * s);
  return a / std::sqrt(static_cast<double>(P));
}

namespace {

std::vector<int> dft_indices(int P, int oversampling, double sector_deg) {
  if (P < 1 || oversampling < 1) throw std::invalid_argument("invalid DFT codebook size");
  const int n = P * oversampling;
  const double limit = 0.5 * sector_deg * (1.0 + 1e-12);
  std::vector<int> ks;
  for (int k = -n / 2; k < n - n / 2; ++k) {
    const double u = 2.0 * k / n;
    if (std::abs(u) > 1.0) continue;
    if (std::abs(std::asin(u)) * 180.0 / kPi <= limit) ks.push_back(k);
  }
  if (ks.empty()) throw std::invalid_argument("sector too narrow: no DFT beam selected");
  return ks;
}

}  // namespace

std::vector<double> dft_reference_angles(int P, int oversampling, double sector_deg) {
  std::vector<double> out;
  for (int k : dft_indices(P, oversampling, sector_deg))
    out.push_back(std::asin(2.0 * k / (P * oversampling)) * 180.0 / kPi);
  return out;
}

Codebook dft_reference(int P, int oversampling, double sector_deg, Mode mode) {
  const auto ks = dft_indices(P, oversampling, sector_deg);
  CMat e(P, static_cast<Eigen::Index>(ks.size()));
  const double inv = 1.0 / std::sqrt(static_cast<double>(P));
  const double n = static_cast<double>(P) * oversampling;
  for (std::size_t j = 0; j < ks.size(); ++j)
    for (int p = 0; p < P; ++p) e(p, j) = std::polar(inv, -2.0 * kPi * p * ks[j] / n);
  return Codebook(std::move(e), mode);
}

Eigen::MatrixXd si_matrix(const Codebook& rx_cb, const Codebook& tx_cb,
                          const TappedSiChannel& channel) {
  check_dims(rx_cb, tx_cb, channel.rx_dim(), channel.tx_dim());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rx_cb.beams(), tx_cb.beams());
  for (const auto& t : channel.taps())
    acc += (rx_cb.entries().adjoint() * t.gain * tx_cb.entries()).cwiseAbs();
  return acc;
}

double max_si(const Codebook& rx_cb, const Codebook& tx_cb, const TappedSiChannel& channel) {
  return si_matrix(rx_cb, tx_cb, channel).maxCoeff();
}

double codebook_deviation(const Codebook& cb, const Codebook& reference) {
  if (cb.antennas() != reference.antennas() || cb.beams() != reference.beams())
    throw std::invalid_argument("codebook shapes differ");
  return (cb.entries() - reference.entries()).squaredNorm() / cb.beams();
}

double frobenius_si(const Codebook& rx_cb, const Codebook& tx_cb, const CMat& flat_channel) {
  check_dims(rx_cb, tx_cb, flat_channel.rows(), flat_channel.cols());
  return (rx_cb.entries().adjoint() * flat_channel * tx_cb.entries()).squaredNorm();
}

BeamPattern beam_gain_pattern(const Codebook& cb, int column, const UlaGeometry& geometry,
                              const std::vector<double>& angles, bool apply_element_pattern) {
  if (column < 0 || column >= cb.beams()) throw std::out_of_range("codebook column out of range");
  if (geometry.num_elements != cb.antennas())
    throw std::invalid_argument("geometry and codebook sizes differ");
  if (angles.empty()) throw std::invalid_argument("no angles given");
  BeamPattern bp;
  bp.angles = angles;
  const CVec w = cb.column(column);
  const double sp = std::sqrt(static_cast<double>(cb.antennas()));
  for (double th : angles) {
    double g = db20(sp * std::abs(steering_vector(geometry, th).dot(w)));
    if (apply_element_pattern) g += element_gain_db(th);
    bp.gains_db.push_back(g);
  }
  return bp;
}

}  // namespace cissir
