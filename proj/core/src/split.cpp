#include "cissir/split.hpp"

#include <algorithm>
#include <stdexcept>

namespace cissir {

SplitGrams integral_split(const TappedSiChannel& channel) {
  const int M = channel.rx_dim(), N = channel.tx_dim();
  SplitGrams out{CMat::Zero(N, N), CMat::Zero(M, M)};
  double max_norm = 0.0;
  for (const auto& t : channel.taps()) max_norm = std::max(max_norm, t.gain.norm());
  if (max_norm == 0.0) return out;
  for (const auto& t : channel.taps()) {
    if (t.gain.norm() < 1e-15 * max_norm) continue;
    Eigen::JacobiSVD<CMat> svd(t.gain, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (!s.allFinite()) throw std::runtime_error("SVD failed on channel tap");
    out.g_tx.noalias() += svd.matrixV() * s.asDiagonal() * svd.matrixV().adjoint();
    out.g_rx.noalias() += svd.matrixU() * s.asDiagonal() * svd.matrixU().adjoint();
  }
  out.g_tx = 0.5 * (out.g_tx + out.g_tx.adjoint()).eval();
  out.g_rx = 0.5 * (out.g_rx + out.g_rx.adjoint()).eval();
  return out;
}

double quad_form(const CMat& g, const CVec& v) {
  return std::max(0.0, v.dot(g * v).real());
}

double split_bound(const Codebook& rx_cb, const Codebook& tx_cb, const SplitGrams& grams) {
  if (rx_cb.antennas() != grams.g_rx.rows() || tx_cb.antennas() != grams.g_tx.rows())
    throw std::invalid_argument("codebook and gram dimensions do not match");
  double rx = 0.0, tx = 0.0;
  for (int k = 0; k < rx_cb.beams(); ++k) rx = std::max(rx, quad_form(grams.g_rx, rx_cb.column(k)));
  for (int l = 0; l < tx_cb.beams(); ++l) tx = std::max(tx, quad_form(grams.g_tx, tx_cb.column(l)));
  return std::sqrt(rx) * std::sqrt(tx);
}

}  // namespace cissir
