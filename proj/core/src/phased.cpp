#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cissir/errors.hpp"
#include "cissir/sdp.hpp"

namespace cissir {

SdpProblem phased_column_problem(const CVec& r, const CMat& g, double eps, bool packing) {
  const int P = static_cast<int>(r.size());
  SdpProblem prob;
  prob.dimension = P;
  prob.cost = r * r.adjoint();
  prob.inequalities.push_back({0.5 * (g + g.adjoint()), eps});
  for (int p = 0; p < P; ++p) {
    CMat e = CMat::Zero(P, P);
    e(p, p) = 1.0;
    if (packing) prob.inequalities.push_back({std::move(e), 1.0 / P});
    else prob.equalities.push_back({std::move(e), 1.0 / P});
  }
  return prob;
}

PhasedSolveReport solve_phased_column(const CVec& r, const CMat& g, double eps,
                                      const SdpOptions& options) {
  const int P = static_cast<int>(r.size());
  if (g.rows() != P || g.cols() != P) throw std::invalid_argument("dimension mismatch between r and G");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive and finite");
  const double mod = 1.0 / std::sqrt(static_cast<double>(P));
  if ((r.array().abs() - mod).abs().maxCoeff() > 1e-9)
    throw std::invalid_argument("reference beam must have constant modulus 1/sqrt(P)");

  PhasedSolveReport rep;
  const double rgr = quad_form(g, r);
  if (eps >= rgr) {
    rep.solution = r;
    rep.objective = 1.0;
    rep.rank_metric = 1.0;
    rep.si_value = rgr;
    return rep;
  }

  const SdpSolution sol = solve_sdp(phased_column_problem(r, g, eps), options);
  rep.status = sol.status;
  rep.iterations = sol.iterations;

  Eigen::SelfAdjointEigenSolver<CMat> es(sol.z_matrix);
  const double smax = std::max(es.eigenvalues()(P - 1), 0.0);
  CVec z = std::sqrt(smax) * es.eigenvectors().col(P - 1);
  const double tr = sol.z_matrix.trace().real();
  rep.rank_metric = tr > 0.0 ? smax / tr : 0.0;

  double err = 0.0;
  for (int p = 0; p < P; ++p) err = std::max(err, std::abs(std::abs(z(p)) - mod));
  rep.projected = err > 1e-6;
  for (int p = 0; p < P; ++p)
    z(p) = std::abs(z(p)) > 0.0 ? mod * z(p) / std::abs(z(p)) : cd(mod, 0.0);
  // global phase so that r^H z is real and nonnegative
  const cd zr = z.dot(r);
  if (std::abs(zr) > 0.0) z *= zr / std::abs(zr);

  rep.solution = z;
  rep.objective = r.dot(z).real();
  rep.si_value = quad_form(g, z);
  rep.bound_violation = rep.si_value > eps * (1.0 + 1e-3);
  return rep;
}

PhasedResult optimize_codebooks_phased(const SplitGrams& grams, const Codebook& ref_tx,
                                       const Codebook& ref_rx, double eps, double beta,
                                       const SdpOptions& options) {
  if (!(eps > 0.0) || !(beta > 0.0)) throw std::invalid_argument("eps and beta must be positive");
  if (ref_tx.mode() != Mode::Phased || ref_rx.mode() != Mode::Phased)
    throw std::invalid_argument("phased optimization needs phased reference codebooks");
  if (ref_tx.antennas() != grams.g_tx.rows() || ref_rx.antennas() != grams.g_rx.rows())
    throw std::invalid_argument("codebook and gram dimensions do not match");

  std::vector<InfeasibleError::Column> bad;
  int stalled = 0;
  auto run = [&](const Codebook& ref, const CMat& g, double budget, bool tx,
                 std::vector<PhasedSolveReport>& reps) {
    CMat out(ref.antennas(), ref.beams());
    bool side_infeasible = false;
    for (int j = 0; j < ref.beams(); ++j) {
      // The feasible set does not depend on r, so one certificate covers the side.
      if (side_infeasible) {
        PhasedSolveReport rep;
        rep.solution = ref.column(j);
        rep.objective = std::nan("");
        rep.si_value = quad_form(g, rep.solution);
        rep.status = SdpStatus::Infeasible;
        reps.push_back(std::move(rep));
      } else {
        reps.push_back(solve_phased_column(ref.column(j), g, budget, options));
        side_infeasible = reps.back().status == SdpStatus::Infeasible;
      }
      if (reps.back().status == SdpStatus::Infeasible)
        bad.push_back({tx, j, budget, std::nan("")});
      else if (reps.back().status == SdpStatus::MaxIter)
        ++stalled;
      out.col(j) = reps.back().solution;
    }
    return out;
  };
  std::vector<PhasedSolveReport> tx_reps, rx_reps;
  CMat w = run(ref_tx, grams.g_tx, eps * beta, true, tx_reps);
  CMat c = run(ref_rx, grams.g_rx, eps / beta, false, rx_reps);
  if (!bad.empty()) {
    const std::string msg = std::to_string(bad.size()) + " codebook column(s) infeasible";
    throw InfeasibleError(msg, std::move(bad));
  }
  if (stalled > 0)
    throw ConvergenceError(std::to_string(stalled) + " SDP column(s) hit the iteration cap");
  return {{Codebook(std::move(w), Mode::Phased), Codebook(std::move(c), Mode::Phased)},
          std::move(tx_reps), std::move(rx_reps)};
}

PhasedResult optimize_codebooks_phased(const TappedSiChannel& channel, const Codebook& ref_tx,
                                       const Codebook& ref_rx, double eps, double beta,
                                       const SdpOptions& options) {
  return optimize_codebooks_phased(integral_split(channel), ref_tx, ref_rx, eps, beta, options);
}

}  // namespace cissir
