#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cissir/cissir.hpp"

namespace cissir::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  SiScenario scenario = default_scenario();
  RadarTarget target;
  OfdmConfig ofdm;
  NoiseBudget budget;           // papr_sum is measured from the waveform at run time
  int oversampling = 4;
  double sector_deg = 120.0;

  Mode solver = Mode::Tapered;
  double eps_db = -85.0;
  double beta = 1.0;
  double tolerance = 1e-7;
  int max_iterations = 50000;        // ADMM cap for the phased solver
  std::vector<double> sweep_eps_db;  // ascending

  double target_noise_dbm = -90.8;   // sigma_star^2 for the budget command
  double saturation_dbm = -20.0;     // per-antenna P_sat

  bool cancel_si = false;
  bool quantize = true;
  int profile_bins = 512;

  std::filesystem::path output_dir = "out";

  void validate() const;
};

RunConfig default_config();

// INI-style `key = value` text with [section] headers. Unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Evenly spaced dB values, both ends included.
std::vector<double> linspace_db(double lo, double hi, int points);

}  // namespace cissir::app
