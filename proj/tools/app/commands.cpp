#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>

namespace cissir::app {

namespace fs = std::filesystem;

namespace {

int nearest_beam(const std::vector<double>& angles, double az) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(angles.size()); ++j)
    if (std::abs(angles[j] - az) < std::abs(angles[best] - az)) best = j;
  return best;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

// Per-pair l1 SI of one TX/RX beam pair.
double pair_si(const TappedSiChannel& ch, const CVec& c, const CVec& w) {
  double acc = 0.0;
  for (const auto& t : ch.taps()) acc += std::abs(c.dot(t.gain * w));
  return acc;
}

void report_infeasible(const InfeasibleError& e, std::ostream& err) {
  err << "infeasible: " << e.what() << "\n";
  for (const auto& c : e.columns()) {
    err << "  " << (c.tx ? "tx" : "rx") << " column " << c.index << ": budget "
        << fixed(db10(c.budget)) << " dB";
    if (std::isfinite(c.threshold)) {
      err << ", needs above " << (c.threshold > 0.0 ? fixed(db10(c.threshold)) : "-inf") << " dB";
    }
    err << "\n";
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    report_infeasible(e, err);
    return kInfeasible;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

Pipeline build_pipeline(const RunConfig& cfg) {
  const double ts = cfg.ofdm.sample_interval;
  const double bw = cfg.ofdm.bandwidth();
  const TappedSiChannel flat = build_si_channel(cfg.scenario);
  TappedSiChannel sense = discretize(flat, ts, bw);
  TappedSiChannel metric = cfg.scenario.include_clutter ? sense : flat;
  TappedSiChannel radar = discretize(
      build_radar_channel(cfg.scenario.tx_array, cfg.scenario.rx_array, cfg.target, bw), ts, bw);
  SplitGrams grams = integral_split(metric);
  const int n = cfg.scenario.tx_array.num_elements;
  const int m = cfg.scenario.rx_array.num_elements;
  Pipeline p{std::move(metric),
             std::move(sense),
             std::move(radar),
             std::move(grams),
             dft_reference(n, cfg.oversampling, cfg.sector_deg),
             dft_reference(m, cfg.oversampling, cfg.sector_deg),
             0,
             0,
             bw};
  p.target_beam_tx = nearest_beam(dft_reference_angles(n, cfg.oversampling, cfg.sector_deg),
                                  cfg.target.azimuth);
  p.target_beam_rx = nearest_beam(dft_reference_angles(m, cfg.oversampling, cfg.sector_deg),
                                  cfg.target.azimuth);
  return p;
}

OptimizeOutcome run_optimize(const Pipeline& p, const RunConfig& cfg, Mode solver, double eps_db) {
  const double eps = from_db20(eps_db);
  const Codebook ref_tx = p.ref_tx.as_mode(solver);
  const Codebook ref_rx = p.ref_rx.as_mode(solver);
  std::vector<ColumnRow> rows;
  std::optional<CodebookPair> books;
  if (solver == Mode::Tapered) {
    TaperedResult r = optimize_codebooks_tapered(p.grams, ref_tx, ref_rx, eps, cfg.beta);
    auto add = [&](const std::vector<TaperedSolveReport>& reps, bool tx) {
      for (std::size_t j = 0; j < reps.size(); ++j) {
        const auto& x = reps[j];
        rows.push_back({tx, static_cast<int>(j), x.objective,
                        x.nu_star ? *x.nu_star : std::numeric_limits<double>::quiet_NaN(),
                        x.si_value, to_string(x.kase)});
      }
    };
    add(r.tx_reports, true);
    add(r.rx_reports, false);
    books = std::move(r.codebooks);
  } else {
    SdpOptions opt;
    opt.tolerance = cfg.tolerance;
    opt.max_iterations = cfg.max_iterations;
    PhasedResult r = optimize_codebooks_phased(p.grams, ref_tx, ref_rx, eps, cfg.beta, opt);
    auto add = [&](const std::vector<PhasedSolveReport>& reps, bool tx) {
      for (std::size_t j = 0; j < reps.size(); ++j) {
        const auto& x = reps[j];
        std::string kase = to_string(x.status);
        if (x.projected) kase += "+projected";
        if (x.bound_violation) kase += "+violation";
        rows.push_back({tx, static_cast<int>(j), x.objective, x.rank_metric, x.si_value, kase});
      }
    };
    add(r.tx_reports, true);
    add(r.rx_reports, false);
    books = std::move(r.codebooks);
  }
  OptimizeOutcome out{std::move(*books), 0.0, 0.0, 0.0, 0.0, std::move(rows)};
  out.max_si = max_si(out.codebooks.rx, out.codebooks.tx, p.metric_channel);
  out.sigma_tx = codebook_deviation(out.codebooks.tx, ref_tx);
  out.sigma_rx = codebook_deviation(out.codebooks.rx, ref_rx);
  for (const auto& t : p.metric_channel.taps())
    out.frobenius += frobenius_si(out.codebooks.rx, out.codebooks.tx, t.gain);
  return out;
}

SweepOutcome run_sweep(const Pipeline& p, const RunConfig& cfg, Mode solver, bool timing) {
  SweepOutcome out;
  for (double e : cfg.sweep_eps_db) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      const OptimizeOutcome o = run_optimize(p, cfg, solver, e);
      const auto t1 = std::chrono::steady_clock::now();
      SweepRow row{e, db20(o.max_si), db10(o.sigma_tx), db10(o.sigma_rx), db10(o.frobenius),
                   std::nullopt};
      if (timing) row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      out.rows.push_back(row);
    } catch (const InfeasibleError& ex) {
      out.skipped.push_back("eps " + fixed(e) + " dB: " + ex.what());
      if (out.first_error == kOk) out.first_error = kInfeasible;
    } catch (const ConvergenceError& ex) {
      out.skipped.push_back("eps " + fixed(e) + " dB: " + ex.what());
      if (out.first_error == kOk) out.first_error = kNoConvergence;
    }
  }
  return out;
}

BeamPairSimConfig sim_config(const RunConfig& cfg) {
  BeamPairSimConfig s;
  s.p_tx = cfg.budget.p_tx;
  s.sigma_thermal_sq = cfg.budget.sigma_thermal_sq;
  s.adc_bits = cfg.budget.adc_bits;
  s.gamma = cfg.budget.gamma;
  s.quantize = cfg.quantize;
  s.cancel_si = cfg.cancel_si;
  s.kernel_latency = kernel_latency_samples();
  s.profile_bins = cfg.profile_bins;
  return s;
}

NoiseBudget measured_budget(const RunConfig& cfg) {
  NoiseBudget b = cfg.budget;
  b.papr_sum = mean_papr(cfg.ofdm);
  b.k_chains = 1;
  return b;
}

SenseOutcome run_sense(const Pipeline& p, const RunConfig& cfg, Mode solver) {
  const double ts = cfg.ofdm.sample_interval;
  const BeamPairSimConfig sc = sim_config(cfg);
  const NoiseBudget nb = measured_budget(cfg);
  const Codebook ref_tx = p.ref_tx.as_mode(solver);
  const Codebook ref_rx = p.ref_rx.as_mode(solver);
  const CVec w0 = ref_tx.column(p.target_beam_tx);
  const CVec c0 = ref_rx.column(p.target_beam_rx);

  SenseOutcome out;
  out.reference = simulate_beam_pair(cfg.ofdm, p.sense_channel, p.radar_channel, c0, w0, sc);
  out.reference_max_si = max_si(ref_rx, ref_tx, p.metric_channel);
  const Samples h0 = effective_response(p.radar_channel, c0, w0, ts);
  out.zeta = calibrate_zeta(cfg.ofdm, h0);
  // The bound keeps the reference pair's radar response for every eps.
  const double e_r = response_energy(h0, ts);

  // Range cell and the extent of the SI footprint on the range axis.
  const double cell = kSpeedOfLight / (2.0 * p.bandwidth);
  const double si_end = p.sense_channel.taps().back().delay - kernel_latency_samples() * ts;
  const double min_range = 0.5 * kSpeedOfLight * si_end + 4.0 * cell;
  out.reference_stats = profile_stats(out.reference.profile, cfg.target.range, cell, min_range);

  const OptimizeOutcome opt = run_optimize(p, cfg, solver, cfg.eps_db);
  out.optimized_max_si = opt.max_si;
  out.optimized = simulate_beam_pair(cfg.ofdm, p.sense_channel, p.radar_channel,
                                     opt.codebooks.rx.column(p.target_beam_rx),
                                     opt.codebooks.tx.column(p.target_beam_tx), sc);
  out.optimized_stats = profile_stats(out.optimized.profile, cfg.target.range, cell, min_range);

  for (double e : cfg.sweep_eps_db) {
    std::optional<OptimizeOutcome> o;
    try {
      o = run_optimize(p, cfg, solver, e);
    } catch (const InfeasibleError& ex) {
      out.skipped.push_back("eps " + fixed(e) + " dB: " + ex.what());
      continue;
    } catch (const ConvergenceError& ex) {
      out.skipped.push_back("eps " + fixed(e) + " dB: " + ex.what());
      continue;
    }
    const CVec w = o->codebooks.tx.column(p.target_beam_tx);
    const CVec c = o->codebooks.rx.column(p.target_beam_rx);
    const BeamPairSimResult r =
        simulate_beam_pair(cfg.ofdm, p.sense_channel, p.radar_channel, c, w, sc);
    const double m = pair_si(p.sense_channel, c, w);
    const double bound = snr_bound(nb, m, e_r, p.bandwidth, out.zeta);
    out.snr.push_back({e, db10(r.mean_snr), db10(bound), std::sqrt(crlb_range(r.mean_snr, p.bandwidth)),
                       m});
  }
  return out;
}

std::string format_tradeoff_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "eps_db,maxsi_db,sigma_tx_db,sigma_rx_db,frobenius_si_db,runtime_ms\n";
  for (const auto& r : rows) {
    os << format_double(r.eps_db) << ',' << format_double(r.maxsi_db) << ','
       << format_double(r.sigma_tx_db) << ',' << format_double(r.sigma_rx_db) << ','
       << format_double(r.frobenius_si_db) << ',';
    if (r.runtime_ms) os << format_double(*r.runtime_ms);
    os << '\n';
  }
  return os.str();
}

std::string format_profile_csv(const RangeProfile& profile) {
  std::ostringstream os;
  os << "range_m,mag_db\n";
  for (std::size_t i = 0; i < profile.bins.size(); ++i)
    os << format_double(profile.bins[i]) << ',' << format_double(profile.magnitude_db[i]) << '\n';
  return os.str();
}

std::string format_snr_csv(const std::vector<SnrRow>& rows) {
  std::ostringstream os;
  os << "eps_db,snr_db,snr_bound_db,crlb_sqrt_m\n";
  for (const auto& r : rows)
    os << format_double(r.eps_db) << ',' << format_double(r.snr_db) << ','
       << format_double(r.snr_bound_db) << ',' << format_double(r.crlb_sqrt_m) << '\n';
  return os.str();
}

std::string format_report_csv(const std::vector<ColumnRow>& rows) {
  std::ostringstream os;
  os << "side,column,objective,nu_or_upsilon,si_value,case\n";
  for (const auto& r : rows) {
    os << (r.tx ? "tx" : "rx") << ',' << r.index << ',' << format_double(r.objective) << ',';
    if (std::isfinite(r.aux)) os << format_double(r.aux);
    os << ',' << format_double(r.si_value) << ',' << r.kase << '\n';
  }
  return os.str();
}

int cmd_channel(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(cfg.output_dir);
    const Pipeline p = build_pipeline(cfg);
    const double ts = cfg.ofdm.sample_interval;
    // A single flat tap stays continuous (ts = 0) on disk.
    write_channel_file(cfg.output_dir / "si_channel.txt", p.metric_channel,
                       cfg.scenario.include_clutter ? ts : 0.0);
    write_channel_file(cfg.output_dir / "radar_channel.txt", p.radar_channel, ts);
    const double ref_si = max_si(p.ref_rx, p.ref_tx, p.metric_channel);
    out << "mode = " << (cfg.scenario.include_clutter ? "multipath" : "single-path") << "\n";
    out << "si_taps = " << p.metric_channel.size() << "\n";
    out << "reference_beams = " << p.ref_tx.beams() << "\n";
    out << "reference_max_si_db = " << num(db20(ref_si)) << "\n";
    return int{kOk};
  });
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(cfg.output_dir);
    const Pipeline p = build_pipeline(cfg);
    const OptimizeOutcome o = run_optimize(p, cfg, cfg.solver, cfg.eps_db);
    write_codebook_file(cfg.output_dir / "W.txt", o.codebooks.tx);
    write_codebook_file(cfg.output_dir / "C.txt", o.codebooks.rx);
    write_file_atomic(cfg.output_dir / "columns.csv", format_report_csv(o.rows));
    out << "solver = " << to_string(cfg.solver) << "\n";
    out << "eps_db = " << num(cfg.eps_db) << "\n";
    out << "max_si = " << num(o.max_si) << "\n";
    out << "max_si_db = " << num(db20(o.max_si)) << "\n";
    out << "sigma_tx_sq_db = " << num(db10(o.sigma_tx)) << "\n";
    out << "sigma_rx_sq_db = " << num(db10(o.sigma_rx)) << "\n";
    out << "si_gap_db = " << num(cfg.eps_db - db20(o.max_si)) << "\n";
    return int{kOk};
  });
}

int cmd_sweep(const RunConfig& cfg, bool timing, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(cfg.output_dir);
    const Pipeline p = build_pipeline(cfg);
    const SweepOutcome s = run_sweep(p, cfg, cfg.solver, timing);
    for (const auto& note : s.skipped) err << "skipped " << note << "\n";
    if (s.rows.empty()) return s.first_error == kOk ? int{kInfeasible} : s.first_error;
    write_file_atomic(cfg.output_dir / "tradeoff.csv", format_tradeoff_csv(s.rows));
    out << "solver = " << to_string(cfg.solver) << "\n";
    out << "points = " << s.rows.size() << " of " << cfg.sweep_eps_db.size() << "\n";
    return int{kOk};
  });
}

int cmd_sense(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ensure_dir(cfg.output_dir);
    const Pipeline p = build_pipeline(cfg);
    const SenseOutcome s = run_sense(p, cfg, cfg.solver);
    for (const auto& note : s.skipped) err << "skipped " << note << "\n";
    write_file_atomic(cfg.output_dir / "profile_reference.csv", format_profile_csv(s.reference.profile));
    write_file_atomic(cfg.output_dir / "profile_optimized.csv", format_profile_csv(s.optimized.profile));
    write_file_atomic(cfg.output_dir / "snr.csv", format_snr_csv(s.snr));
    out << "reference_max_si_db = " << fixed(db20(s.reference_max_si)) << "\n";
    out << "reference_floor_db = " << fixed(s.reference_stats.floor_db) << "\n";
    out << "reference_peak_over_floor_db = " << fixed(s.reference_stats.peak_over_floor_db()) << "\n";
    out << "optimized_max_si_db = " << fixed(db20(s.optimized_max_si)) << "\n";
    out << "optimized_floor_db = " << fixed(s.optimized_stats.floor_db) << "\n";
    out << "optimized_peak_over_floor_db = " << fixed(s.optimized_stats.peak_over_floor_db()) << "\n";
    out << "zeta = " << fixed(s.zeta, 4) << "\n";
    return int{kOk};
  });
}

int cmd_budget(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Pipeline p = build_pipeline(cfg);
    const NoiseBudget nb = measured_budget(cfg);
    const double sigma_star = from_db10(cfg.target_noise_dbm - 30.0);
    const double eps = target_si(sigma_star, nb, PaprEstimate::average(nb.papr_sum));
    const double p_sat = from_db10(cfg.saturation_dbm - 30.0);
    const double beta = beta_for_saturation(p_sat, nb, p.grams, eps);
    out << "b_q = " << num(nb.b_q()) << "\n";
    out << "mean_papr_db = " << fixed(db10(nb.papr_sum)) << "\n";
    out << "target_noise_dbm = " << fixed(cfg.target_noise_dbm) << "\n";
    out << "eps_db = " << fixed(db20(eps)) << "\n";
    out << "saturation_dbm = " << fixed(cfg.saturation_dbm) << "\n";
    out << "beta = " << num(beta) << "\n";
    out << "beta_db = " << fixed(db10(beta)) << "\n";
    return int{kOk};
  });
}

}  // namespace cissir::app
