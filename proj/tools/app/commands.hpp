#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cissir::app {

enum ExitCode { kOk = 0, kConfigError = 2, kInfeasible = 3, kNoConvergence = 4 };

// Everything the commands derive from a config before optimizing.
struct Pipeline {
  TappedSiChannel metric_channel;  // flat direct tap in single-path mode, else discretized
  TappedSiChannel sense_channel;   // always discretized
  TappedSiChannel radar_channel;   // discretized
  SplitGrams grams;                // of metric_channel
  Codebook ref_tx;
  Codebook ref_rx;
  int target_beam_tx = 0;          // reference columns closest to the target azimuth
  int target_beam_rx = 0;
  double bandwidth = 0.0;
};

Pipeline build_pipeline(const RunConfig& config);

struct ColumnRow {
  bool tx = true;
  int index = 0;
  double objective = 0.0;
  double aux = 0.0;   // nu_star (tapered, NaN if none) or Upsilon (phased)
  double si_value = 0.0;
  std::string kase;
};

struct OptimizeOutcome {
  CodebookPair codebooks;
  double max_si = 0.0;     // linear amplitude
  double sigma_tx = 0.0;   // deviation, linear
  double sigma_rx = 0.0;
  double frobenius = 0.0;  // sum over taps
  std::vector<ColumnRow> rows;
};

// Throws InfeasibleError / ConvergenceError from the solvers.
OptimizeOutcome run_optimize(const Pipeline& p, const RunConfig& config, Mode solver,
                             double eps_db);

struct SweepRow {
  double eps_db = 0.0;
  double maxsi_db = 0.0;
  double sigma_tx_db = 0.0;
  double sigma_rx_db = 0.0;
  double frobenius_si_db = 0.0;
  std::optional<double> runtime_ms;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::vector<std::string> skipped;  // one note per infeasible or unconverged eps
  int first_error = kOk;
};

SweepOutcome run_sweep(const Pipeline& p, const RunConfig& config, Mode solver, bool timing);

struct SnrRow {
  double eps_db = 0.0;
  double snr_db = 0.0;
  double snr_bound_db = 0.0;
  double crlb_sqrt_m = 0.0;
  double max_si = 0.0;
};

struct SenseOutcome {
  BeamPairSimResult reference;
  BeamPairSimResult optimized;
  ProfileStats reference_stats;
  ProfileStats optimized_stats;
  double reference_max_si = 0.0;
  double optimized_max_si = 0.0;
  double zeta = 1.0;
  std::vector<SnrRow> snr;
  std::vector<std::string> skipped;
};

BeamPairSimConfig sim_config(const RunConfig& config);
NoiseBudget measured_budget(const RunConfig& config);
SenseOutcome run_sense(const Pipeline& p, const RunConfig& config, Mode solver);

std::string format_tradeoff_csv(const std::vector<SweepRow>& rows);
std::string format_profile_csv(const RangeProfile& profile);
std::string format_snr_csv(const std::vector<SnrRow>& rows);
std::string format_report_csv(const std::vector<ColumnRow>& rows);

// Each returns an ExitCode. Human-readable summary goes to out, diagnostics to err.
int cmd_channel(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, bool timing, std::ostream& out, std::ostream& err);
int cmd_sense(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_budget(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cissir::app
