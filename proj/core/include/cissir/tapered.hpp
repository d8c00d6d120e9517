#pragma once

#include <optional>
#include <vector>

#include "cissir/codebook.hpp"
#include "cissir/split.hpp"

namespace cissir {

enum class TaperedCase { ReferenceFeasible, RootSolved, Infeasible };

const char* to_string(TaperedCase c);

struct TaperedSolveReport {
  CVec solution;
  double objective = 0.0;
  std::optional<double> nu_star;
  TaperedCase kase = TaperedCase::Infeasible;
  double kkt_residual = 0.0;
  double si_value = 0.0;
  double sigma_bar = 0.0;  // minimum feasible budget, reported for remediation
};

// sigma-bar(r, G); 0 when G is rank deficient.
double min_feasible_eps(const CVec& r, const CMat& g);

// max Re(r^H z) s.t. z^H G z <= eps, ||z|| = 1
TaperedSolveReport solve_tapered_column(const CVec& r, const CMat& g, double eps);

// Coefficients (ascending powers) of
// P(nu) = sum_p (sigma_p - eps) w_p prod_{q != p} (sigma_q + nu)^2.
std::vector<double> tapered_polynomial(const RVec& sigma, const RVec& weights, double eps);
// Same polynomial evaluated in product form.
double tapered_polynomial_eval(const RVec& sigma, const RVec& weights, double eps, double nu);

struct CodebookPair {
  Codebook tx;
  Codebook rx;
};

struct TaperedResult {
  CodebookPair codebooks;
  std::vector<TaperedSolveReport> tx_reports;
  std::vector<TaperedSolveReport> rx_reports;
};

// TX columns get budget eps*beta on G_tx, RX columns eps/beta on G_rx.
// Throws InfeasibleError if any column is infeasible.
TaperedResult optimize_codebooks_tapered(const SplitGrams& grams, const Codebook& ref_tx,
                                         const Codebook& ref_rx, double eps, double beta);
TaperedResult optimize_codebooks_tapered(const TappedSiChannel& channel, const Codebook& ref_tx,
                                         const Codebook& ref_rx, double eps, double beta);

}  // namespace cissir
