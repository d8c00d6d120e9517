#pragma once

#include <vector>

#include "cissir/codebook.hpp"
#include "cissir/split.hpp"
#include "cissir/tapered.hpp"

namespace cissir {

struct SdpConstraint {
  CMat a;  // Hermitian
  double b = 0.0;
};

// maximize <cost, Z> s.t. <A_i, Z> <= b_i, <E_j, Z> = b_j, Z PSD
struct SdpProblem {
  int dimension = 0;
  CMat cost;
  std::vector<SdpConstraint> inequalities;
  std::vector<SdpConstraint> equalities;

  void validate() const;
};

enum class SdpStatus { Optimal, MaxIter, Infeasible };
const char* to_string(SdpStatus s);

struct SdpOptions {
  double tolerance = 1e-7;
  int max_iterations = 50000;
  double rho = 0.1;
  double alpha = 1.6;  // over-relaxation
};

struct SdpSolution {
  CMat z_matrix;
  double objective = 0.0;
  double dual_bound = 0.0;        // objective certificate from the dual iterate
  double primal_residual = 0.0;   // max over unit-norm-scaled constraints of violation/(1+|b|)
  SdpStatus status = SdpStatus::MaxIter;
  int iterations = 0;
};

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

// sigma_max(Z) / trace(Z)
double rank_one_metric(const CMat& z);

struct PhasedSolveReport {
  CVec solution;
  double objective = 0.0;
  double rank_metric = 1.0;
  double si_value = 0.0;
  bool projected = false;
  bool bound_violation = false;  // si_value > eps (1 + 1e-3)
  SdpStatus status = SdpStatus::Optimal;
  int iterations = 0;
};

// Inner-product form of the phased per-column problem with diagonal equalities,
// or the packing relaxation (diagonal <= 1/P) when packing is set.
SdpProblem phased_column_problem(const CVec& r, const CMat& g, double eps, bool packing = false);

PhasedSolveReport solve_phased_column(const CVec& r, const CMat& g, double eps,
                                      const SdpOptions& options = {});

struct PhasedResult {
  CodebookPair codebooks;
  std::vector<PhasedSolveReport> tx_reports;
  std::vector<PhasedSolveReport> rx_reports;
};

// Throws InfeasibleError for infeasible columns, ConvergenceError on iteration cap.
PhasedResult optimize_codebooks_phased(const SplitGrams& grams, const Codebook& ref_tx,
                                       const Codebook& ref_rx, double eps, double beta,
                                       const SdpOptions& options = {});
PhasedResult optimize_codebooks_phased(const TappedSiChannel& channel, const Codebook& ref_tx,
                                       const Codebook& ref_rx, double eps, double beta,
                                       const SdpOptions& options = {});

}  // namespace cissir
