#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace cissir::app {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

const std::set<std::string> kKeys = {
    "scenario.num_tx", "scenario.num_rx", "scenario.carrier_hz", "scenario.element_spacing_m",
    "scenario.tx_rx_separation_m", "scenario.wall_distance_m", "scenario.wall_azimuth_deg",
    "scenario.wall_reflection", "scenario.clutter", "scenario.element_pattern",
    "target.azimuth_deg", "target.range_m", "target.rcs_m2",
    "codebook.oversampling", "codebook.sector_deg",
    "ofdm.subcarriers", "ofdm.subcarrier_spacing_hz", "ofdm.cyclic_prefix_samples",
    "ofdm.modulation_order", "ofdm.symbols", "ofdm.sample_interval_s", "ofdm.seed",
    "budget.adc_bits", "budget.gamma", "budget.p_tx_dbm", "budget.thermal_noise_dbm",
    "budget.target_noise_dbm", "budget.saturation_dbm",
    "solver.method", "solver.eps_db", "solver.beta", "solver.tolerance", "solver.max_iterations",
    "sweep.eps_db", "sweep.eps_min_db", "sweep.eps_max_db", "sweep.points",
    "sense.cancel_si", "sense.quantize", "sense.profile_bins",
    "output.dir"};

}  // namespace

std::vector<double> linspace_db(double lo, double hi, int points) {
  if (points < 1) throw ConfigError("sweep needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[i] = lo + (hi - lo) * i / (points - 1);
  return v;
}

RunConfig default_config() {
  RunConfig c;
  c.budget.p_tx = from_db10(30.0 - 30.0);
  c.budget.sigma_thermal_sq = from_db10(-90.8 - 30.0);
  c.sweep_eps_db = linspace_db(-100.0, -55.0, 20);
  return c;
}

void RunConfig::validate() const {
  try {
    scenario.validate();
    ofdm.validate();
    budget.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (oversampling < 1) throw ConfigError("oversampling must be >= 1");
  if (!(sector_deg > 0.0 && sector_deg <= 180.0)) throw ConfigError("sector_deg must lie in (0, 180]");
  if (!std::isfinite(eps_db)) throw ConfigError("eps_db must be finite");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (sweep_eps_db.empty()) throw ConfigError("sweep list is empty");
  if (!(target.range > 0.0) || !(target.rcs > 0.0)) throw ConfigError("target range and rcs must be positive");
  if (profile_bins < 8) throw ConfigError("profile_bins must be >= 8");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  RunConfig c = default_config();
  for (const auto& [sec, body] : tree) {
    if (body.empty()) throw ConfigError("key outside a section: " + sec);
    for (const auto& [k, v] : body) {
      if (!kKeys.count(sec + "." + k)) throw ConfigError("unknown key " + sec + "." + k);
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };

  int n_tx = c.scenario.tx_array.num_elements, n_rx = c.scenario.rx_array.num_elements;
  double fc = kSpeedOfLight / c.scenario.tx_array.carrier_wavelength;
  if (auto v = get("scenario.num_tx")) n_tx = static_cast<int>(to_int("num_tx", *v));
  if (auto v = get("scenario.num_rx")) n_rx = static_cast<int>(to_int("num_rx", *v));
  if (auto v = get("scenario.carrier_hz")) fc = to_double("carrier_hz", *v);
  if (n_tx < 1 || n_rx < 1 || !(fc > 0.0)) throw ConfigError("array sizes and carrier must be positive");
  c.scenario = default_scenario(n_tx, n_rx, fc);
  auto& s = c.scenario;
  if (auto v = get("scenario.element_spacing_m")) {
    s.tx_array.element_spacing = s.rx_array.element_spacing = to_double("element_spacing_m", *v);
  }
  if (auto v = get("scenario.tx_rx_separation_m")) s.tx_rx_separation = to_double("tx_rx_separation_m", *v);
  s.rx_array.origin_offset = Eigen::Vector3d(0.0, -s.tx_rx_separation, 0.0);
  if (auto v = get("scenario.wall_distance_m")) s.wall_distance = to_double("wall_distance_m", *v);
  if (auto v = get("scenario.wall_azimuth_deg")) s.wall_azimuth = to_double("wall_azimuth_deg", *v);
  if (auto v = get("scenario.wall_reflection")) s.wall_reflection_coeff = to_double("wall_reflection", *v);
  if (auto v = get("scenario.clutter")) s.include_clutter = to_bool("clutter", *v);
  if (auto v = get("scenario.element_pattern")) s.element_pattern = to_bool("element_pattern", *v);

  if (auto v = get("target.azimuth_deg")) c.target.azimuth = to_double("azimuth_deg", *v);
  if (auto v = get("target.range_m")) c.target.range = to_double("range_m", *v);
  if (auto v = get("target.rcs_m2")) c.target.rcs = to_double("rcs_m2", *v);

  if (auto v = get("codebook.oversampling")) c.oversampling = static_cast<int>(to_int("oversampling", *v));
  if (auto v = get("codebook.sector_deg")) c.sector_deg = to_double("sector_deg", *v);

  auto& o = c.ofdm;
  if (auto v = get("ofdm.subcarriers")) o.num_subcarriers = static_cast<int>(to_int("subcarriers", *v));
  if (auto v = get("ofdm.subcarrier_spacing_hz")) o.subcarrier_spacing = to_double("subcarrier_spacing_hz", *v);
  if (auto v = get("ofdm.cyclic_prefix_samples"))
    o.cyclic_prefix_samples = static_cast<int>(to_int("cyclic_prefix_samples", *v));
  if (auto v = get("ofdm.modulation_order")) o.modulation_order = static_cast<int>(to_int("modulation_order", *v));
  if (auto v = get("ofdm.symbols")) o.num_symbols = static_cast<int>(to_int("symbols", *v));
  if (auto v = get("ofdm.sample_interval_s")) o.sample_interval = to_double("sample_interval_s", *v);
  if (auto v = get("ofdm.seed")) {
    const long long seed = to_int("seed", *v);
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    o.rng_seed = static_cast<std::uint64_t>(seed);
  }

  auto& b = c.budget;
  if (auto v = get("budget.adc_bits")) b.adc_bits = static_cast<int>(to_int("adc_bits", *v));
  if (auto v = get("budget.gamma")) b.gamma = to_double("gamma", *v);
  if (auto v = get("budget.p_tx_dbm")) b.p_tx = from_db10(to_double("p_tx_dbm", *v) - 30.0);
  if (auto v = get("budget.thermal_noise_dbm"))
    b.sigma_thermal_sq = from_db10(to_double("thermal_noise_dbm", *v) - 30.0);
  if (auto v = get("budget.target_noise_dbm")) c.target_noise_dbm = to_double("target_noise_dbm", *v);
  if (auto v = get("budget.saturation_dbm")) c.saturation_dbm = to_double("saturation_dbm", *v);

  if (auto v = get("solver.method")) {
    try {
      c.solver = mode_from_string(trim(*v));
    } catch (const std::invalid_argument&) {
      throw ConfigError("solver.method must be tapered or phased");
    }
  }
  if (auto v = get("solver.eps_db")) c.eps_db = to_double("eps_db", *v);
  if (auto v = get("solver.beta")) c.beta = to_double("beta", *v);
  if (auto v = get("solver.tolerance")) c.tolerance = to_double("tolerance", *v);
  if (auto v = get("solver.max_iterations")) c.max_iterations = static_cast<int>(to_int("max_iterations", *v));

  if (auto v = get("sweep.eps_db")) {
    if (get("sweep.eps_min_db") || get("sweep.eps_max_db") || get("sweep.points"))
      throw ConfigError("give either sweep.eps_db or the eps_min_db/eps_max_db/points range");
    c.sweep_eps_db = to_list("eps_db", *v);
  } else {
    double lo = -100.0, hi = -55.0;
    long long n = 20;
    if (auto x = get("sweep.eps_min_db")) lo = to_double("eps_min_db", *x);
    if (auto x = get("sweep.eps_max_db")) hi = to_double("eps_max_db", *x);
    if (auto x = get("sweep.points")) n = to_int("points", *x);
    if (!(hi >= lo)) throw ConfigError("sweep.eps_max_db below eps_min_db");
    c.sweep_eps_db = linspace_db(lo, hi, static_cast<int>(n));
  }
  std::sort(c.sweep_eps_db.begin(), c.sweep_eps_db.end());

  if (auto v = get("sense.cancel_si")) c.cancel_si = to_bool("cancel_si", *v);
  if (auto v = get("sense.quantize")) c.quantize = to_bool("quantize", *v);
  if (auto v = get("sense.profile_bins")) c.profile_bins = static_cast<int>(to_int("profile_bins", *v));

  if (auto v = get("output.dir")) c.output_dir = trim(*v);

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cissir::app
