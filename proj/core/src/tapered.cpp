#include "cissir/tapered.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cissir/errors.hpp"

namespace cissir {

namespace {

struct Eig {
  RVec sigma;  // ascending, clamped at zero
  CMat q;
};

Eig hermitian_eig(const CMat& g) {
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return {es.eigenvalues().cwiseMax(0.0), es.eigenvectors()};
}

double sigma_bar(const Eig& e, const RVec& w) {
  const long P = e.sigma.size();
  const double smax = e.sigma.maxCoeff();
  if (!(smax > 0.0)) return 0.0;
  for (long p = 0; p < P; ++p)
    if (e.sigma(p) <= 1e-12 * smax) return 0.0;
  double num = 0.0, den = 0.0;
  for (long p = 0; p < P; ++p) {
    num += w(p) / e.sigma(p);
    den += w(p) / (e.sigma(p) * e.sigma(p));
  }
  return den > 0.0 ? num / den : 0.0;
}

// Secular form of P(nu) divided by prod (sigma_q + nu)^2, and its derivative.
std::pair<double, double> secular(const RVec& s, const RVec& w, double e, double nu) {
  double f = 0.0, df = 0.0;
  for (long p = 0; p < s.size(); ++p) {
    if (w(p) == 0.0) continue;
    const double d = s(p) + nu;
    const double c = (s(p) - e) * w(p);
    f += c / (d * d);
    df -= 2.0 * c / (d * d * d);
  }
  return {f, df};
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Largest root of the polynomial with positive real part and negligible imaginary part.
std::optional<double> largest_positive_root(const std::vector<double>& coeffs) {
  std::size_t n = coeffs.size() - 1;
  while (n > 0 && coeffs[n] == 0.0) --n;
  if (n == 0) return std::nullopt;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) comp(0, i) = -coeffs[n - 1 - i] / coeffs[n];
  for (std::size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) return std::nullopt;
  std::optional<double> best;
  for (const auto& z : es.eigenvalues()) {
    if (z.real() > 1e-12 && std::abs(z.imag()) <= 1e-8 * std::abs(z.real()) &&
        (!best || z.real() > *best))
      best = z.real();
  }
  return best;
}

}  // namespace

const char* to_string(TaperedCase c) {
  switch (c) {
    case TaperedCase::ReferenceFeasible: return "reference_feasible";
    case TaperedCase::RootSolved: return "root_solved";
    case TaperedCase::Infeasible: return "infeasible";
  }
  return "unknown";
}

std::vector<double> tapered_polynomial(const RVec& sigma, const RVec& weights, double eps) {
  const long P = sigma.size();
  std::vector<double> total(static_cast<std::size_t>(2 * P - 1), 0.0);
  for (long p = 0; p < P; ++p) {
    std::vector<double> term{(sigma(p) - eps) * weights(p)};
    for (long q = 0; q < P; ++q) {
      if (q == p) continue;
      term = poly_mul(term, {sigma(q) * sigma(q), 2.0 * sigma(q), 1.0});
    }
    for (std::size_t i = 0; i < term.size(); ++i) total[i] += term[i];
  }
  return total;
}

double tapered_polynomial_eval(const RVec& sigma, const RVec& weights, double eps, double nu) {
  double acc = 0.0;
  for (long p = 0; p < sigma.size(); ++p) {
    double term = (sigma(p) - eps) * weights(p);
    for (long q = 0; q < sigma.size(); ++q)
      if (q != p) term *= (sigma(q) + nu) * (sigma(q) + nu);
    acc += term;
  }
  return acc;
}

double min_feasible_eps(const CVec& r, const CMat& g) {
  if (g.rows() != g.cols() || g.rows() != r.size())
    throw std::invalid_argument("dimension mismatch between r and G");
  const Eig e = hermitian_eig(g);
  const RVec w = (e.q.adjoint() * r).cwiseAbs2();
  return sigma_bar(e, w);
}

TaperedSolveReport solve_tapered_column(const CVec& r, const CMat& g, double eps) {
  if (g.rows() != g.cols() || g.rows() != r.size())
    throw std::invalid_argument("dimension mismatch between r and G");
  if (std::abs(r.norm() - 1.0) > 1e-9) throw std::invalid_argument("reference beam must be unit norm");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive and finite");

  TaperedSolveReport rep;
  const double rgr = quad_form(g, r);
  if (eps >= rgr) {
    rep.solution = r;
    rep.objective = 1.0;
    rep.kase = TaperedCase::ReferenceFeasible;
    rep.si_value = rgr;
    return rep;
  }

  const Eig e = hermitian_eig(g);
  const CVec qr = e.q.adjoint() * r;
  const RVec w = qr.cwiseAbs2();
  rep.sigma_bar = sigma_bar(e, w);
  rep.solution = r;
  rep.si_value = rgr;
  if (eps <= rep.sigma_bar) return rep;

  // Work on G / sigma_max for conditioning; nu scales with it.
  const double smax = e.sigma.maxCoeff();
  const RVec s = e.sigma / smax;
  const double es = eps / smax;
  const double rgr_s = rgr / smax;

  const auto start = largest_positive_root(tapered_polynomial(s, w, es));

  double lo = 0.0;
  double hi = s.sum() * (1.0 + rgr_s / es);
  for (int i = 0; i < 200 && secular(s, w, es, hi).first <= 0.0; ++i) hi *= 2.0;
  if (secular(s, w, es, hi).first <= 0.0) return rep;
  {
    const double f0 = secular(s, w, es, 0.0).first;
    if (std::isfinite(f0) && f0 >= 0.0) return rep;
  }

  // Safeguarded Newton from the companion root, bisection when Newton leaves the bracket.
  double nu = (start && *start > lo && *start < hi) ? *start : 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    const auto [f, df] = secular(s, w, es, nu);
    if (f == 0.0) break;
    if (f < 0.0) lo = nu; else hi = nu;
    double next = (df != 0.0 && std::isfinite(df)) ? nu - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - nu) <= 1e-16 * std::max(nu, 1e-300) || hi - lo <= 4e-16 * hi) {
      nu = next;
      break;
    }
    nu = next;
  }
  if (!(nu > 0.0)) return rep;

  const double nu_star = nu * smax;
  CVec zc = e.q * (qr.array() / (e.sigma.array() + nu_star)).matrix();
  const double zn = zc.norm();
  CVec z = zc / zn;

  rep.solution = z;
  rep.nu_star = nu_star;
  rep.kase = TaperedCase::RootSolved;
  rep.objective = r.dot(z).real();
  rep.si_value = quad_form(g, z);
  const double mu = 0.5 * zn;
  const double lambda = nu_star * mu;
  rep.kkt_residual = (-r + 2.0 * mu * (g * z) + 2.0 * lambda * z).norm();
  return rep;
}

TaperedResult optimize_codebooks_tapered(const SplitGrams& grams, const Codebook& ref_tx,
                                         const Codebook& ref_rx, double eps, double beta) {
  if (!(eps > 0.0) || !(beta > 0.0)) throw std::invalid_argument("eps and beta must be positive");
  if (ref_tx.mode() != Mode::Tapered || ref_rx.mode() != Mode::Tapered)
    throw std::invalid_argument("tapered optimization needs tapered reference codebooks");
  if (ref_tx.antennas() != grams.g_tx.rows() || ref_rx.antennas() != grams.g_rx.rows())
    throw std::invalid_argument("codebook and gram dimensions do not match");

  std::vector<InfeasibleError::Column> bad;
  auto run = [&](const Codebook& ref, const CMat& g, double budget, bool tx,
                 std::vector<TaperedSolveReport>& reps) {
    CMat out(ref.antennas(), ref.beams());
    for (int j = 0; j < ref.beams(); ++j) {
      reps.push_back(solve_tapered_column(ref.column(j), g, budget));
      if (reps.back().kase == TaperedCase::Infeasible)
        bad.push_back({tx, j, budget, reps.back().sigma_bar});
      out.col(j) = reps.back().solution;
    }
    return out;
  };
  std::vector<TaperedSolveReport> tx_reps, rx_reps;
  CMat w = run(ref_tx, grams.g_tx, eps * beta, true, tx_reps);
  CMat c = run(ref_rx, grams.g_rx, eps / beta, false, rx_reps);
  if (!bad.empty()) {
    const std::string msg = std::to_string(bad.size()) + " codebook column(s) infeasible";
    throw InfeasibleError(msg, std::move(bad));
  }
  return {{Codebook(std::move(w), Mode::Tapered), Codebook(std::move(c), Mode::Tapered)},
          std::move(tx_reps), std::move(rx_reps)};
}

TaperedResult optimize_codebooks_tapered(const TappedSiChannel& channel, const Codebook& ref_tx,
                                         const Codebook& ref_rx, double eps, double beta) {
  return optimize_codebooks_tapered(integral_split(channel), ref_tx, ref_rx, eps, beta);
}

}  // namespace cissir
