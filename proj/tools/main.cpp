#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app/commands.hpp"

using namespace cissir;
using namespace cissir::app;

int main(int argc, char** argv) {
  CLI::App cli{"SI-reduced beam codebook design for monostatic ISAC"};
  cli.require_subcommand(1);
  cli.fallthrough();

  std::string config_path, solver;
  std::optional<double> eps_db, beta;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool no_clutter = false;
  bool timing = false;

  cli.add_option("--config", config_path, "config file (key = value with [section] headers)");
  cli.add_option("--solver", solver, "tapered or phased")->check(CLI::IsMember({"tapered", "phased"}));
  cli.add_option("--eps-db", eps_db, "target max-SI in dB");
  cli.add_option("--beta", beta, "TX/RX budget split")->check(CLI::PositiveNumber);
  cli.add_option("--seed", seed, "waveform and noise seed");
  cli.add_flag("--no-clutter", no_clutter, "single-path SI channel (no wall)");
  cli.add_option("--out", out_dir, "output directory");

  auto* channel = cli.add_subcommand("channel", "build the SI and radar channels, print reference max-SI");
  auto* optimize = cli.add_subcommand("optimize", "optimize codebooks at one eps");
  auto* sweep = cli.add_subcommand("sweep", "trade-off sweep over eps");
  sweep->add_flag("--timing", timing, "record wall-clock runtime_ms (breaks byte determinism)");
  auto* sense = cli.add_subcommand("sense", "range profiles and SNR sweep");
  auto* budget = cli.add_subcommand("budget", "eps and beta from noise and saturation targets");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kConfigError;
  }

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (!solver.empty()) cfg.solver = mode_from_string(solver);
    if (eps_db) cfg.eps_db = *eps_db;
    if (beta) cfg.beta = *beta;
    if (seed) cfg.ofdm.rng_seed = *seed;
    if (no_clutter) cfg.scenario.include_clutter = false;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  if (channel->parsed()) return cmd_channel(cfg, std::cout, std::cerr);
  if (optimize->parsed()) return cmd_optimize(cfg, std::cout, std::cerr);
  if (sweep->parsed()) return cmd_sweep(cfg, timing, std::cout, std::cerr);
  if (sense->parsed()) return cmd_sense(cfg, std::cout, std::cerr);
  if (budget->parsed()) return cmd_budget(cfg, std::cout, std::cerr);
  return kConfigError;
}
