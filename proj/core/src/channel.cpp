#include "cissir/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cissir {

namespace {

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

// Azimuth of a direction vector relative to a boresight, wrapped to (-180, 180].
double relative_azimuth_deg(const Eigen::Vector3d& v, double boresight_deg) {
  double a = rad2deg(std::atan2(v.y(), v.x())) - boresight_deg;
  a = std::remainder(a, 360.0);
  return a;
}

double element_amplitude(double phi_deg) {
  return from_db20(element_gain_db(phi_deg, kElementPeakGainDb));
}

// sin(pi x)/(pi x), exact zero at nonzero integers.
double sinc(double x) {
  if (std::abs(x) < 1e-15) return 1.0;
  const double r = std::round(x);
  if (r != 0.0 && std::abs(x - r) < 1e-12) return 0.0;
  return std::sin(kPi * x) / (kPi * x);
}

}  // namespace

void UlaGeometry::validate() const {
  if (num_elements < 1) throw std::invalid_argument("ULA needs at least one element");
  if (!(element_spacing > 0)) throw std::invalid_argument("ULA element spacing must be positive");
  if (!(carrier_wavelength > 0)) throw std::invalid_argument("carrier wavelength must be positive");
}

Eigen::Vector3d UlaGeometry::axis(bool transmit) const {
  const double b = deg2rad(boresight_azimuth);
  Eigen::Vector3d ax(std::sin(b), -std::cos(b), 0.0);
  return transmit ? Eigen::Vector3d(-ax) : ax;
}

Eigen::Vector3d UlaGeometry::element_position(int p, bool transmit) const {
  return origin_offset + static_cast<double>(p) * element_spacing * axis(transmit);
}

Eigen::Vector3d UlaGeometry::centroid(bool transmit) const {
  return origin_offset + 0.5 * (num_elements - 1) * element_spacing * axis(transmit);
}

UlaGeometry half_wavelength_ula(int num_elements, double carrier_hz) {
  UlaGeometry g;
  g.num_elements = num_elements;
  g.carrier_wavelength = kSpeedOfLight / carrier_hz;
  g.element_spacing = 0.5 * g.carrier_wavelength;
  return g;
}

void SiScenario::validate() const {
  tx_array.validate();
  rx_array.validate();
  const double lam = tx_array.carrier_wavelength;
  if (tx_rx_separation < 0.5 * lam * (1.0 - 1e-12))
    throw std::invalid_argument("TX-RX separation below half a wavelength");
  if (!(wall_distance > 0)) throw std::invalid_argument("wall distance must be positive");
  if (std::abs(wall_reflection_coeff) > 1.0)
    throw std::invalid_argument("wall reflection coefficient magnitude exceeds 1");
}

SiScenario default_scenario(int n_tx, int m_rx, double carrier_hz) {
  SiScenario s;
  s.tx_array = half_wavelength_ula(n_tx, carrier_hz);
  s.rx_array = half_wavelength_ula(m_rx, carrier_hz);
  s.tx_rx_separation = s.tx_array.element_spacing;
  // TX runs along +y from the origin, RX along -y starting one gap below.
  s.rx_array.origin_offset = Eigen::Vector3d(0.0, -s.tx_rx_separation, 0.0);
  return s;
}

TappedSiChannel::TappedSiChannel(std::vector<Tap> taps, int rx_dim, int tx_dim)
    : taps_(std::move(taps)), rx_dim_(rx_dim), tx_dim_(tx_dim) {
  if (taps_.empty()) throw std::invalid_argument("channel needs at least one tap");
  if (rx_dim < 1 || tx_dim < 1) throw std::invalid_argument("channel dimensions must be positive");
  double prev = -1.0;
  for (const auto& t : taps_) {
    if (!(t.delay >= 0.0) || !std::isfinite(t.delay))
      throw std::invalid_argument("tap delays must be finite and nonnegative");
    if (t.delay <= prev) throw std::invalid_argument("tap delays must be strictly increasing");
    prev = t.delay;
    if (t.gain.rows() != rx_dim || t.gain.cols() != tx_dim)
      throw std::invalid_argument("tap gain has wrong dimensions");
    if (!t.gain.allFinite()) throw std::invalid_argument("tap gain has non-finite entries");
  }
}

TappedSiChannel TappedSiChannel::merge(const TappedSiChannel& a, const TappedSiChannel& b) {
  if (a.rx_dim() != b.rx_dim() || a.tx_dim() != b.tx_dim())
    throw std::invalid_argument("cannot merge channels of different dimensions");
  std::map<double, CMat> acc;
  for (const auto* ch : {&a, &b})
    for (const auto& t : ch->taps()) {
      auto [it, fresh] = acc.try_emplace(t.delay, t.gain);
      if (!fresh) it->second += t.gain;
    }
  std::vector<Tap> taps;
  taps.reserve(acc.size());
  for (auto& [d, g] : acc) taps.push_back({d, std::move(g)});
  return TappedSiChannel(std::move(taps), a.rx_dim(), a.tx_dim());
}

double TappedSiChannel::energy() const {
  double e = 0.0;
  for (const auto& t : taps_) e += t.gain.squaredNorm();
  return e;
}

double element_gain_db(double phi_deg, double peak_gain_db) {
  const double r = phi_deg / 65.0;
  return peak_gain_db - std::min(12.0 * r * r, 30.0);
}

TappedSiChannel build_direct_coupling(const SiScenario& scenario) {
  scenario.validate();
  const auto& tx = scenario.tx_array;
  const auto& rx = scenario.rx_array;
  const double lam = tx.carrier_wavelength;
  const int M = rx.num_elements, N = tx.num_elements;
  CMat g(M, N);
  double dist_sum = 0.0;
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < N; ++n) {
      const Eigen::Vector3d v = rx.element_position(m, false) - tx.element_position(n, true);
      const double d = v.norm();
      if (!(d > 0.0)) throw std::invalid_argument("coincident TX and RX elements");
      double amp = lam / (4.0 * kPi * d);
      if (scenario.element_pattern)
        amp *= element_amplitude(relative_azimuth_deg(v, tx.boresight_azimuth)) *
               element_amplitude(relative_azimuth_deg(-v, rx.boresight_azimuth));
      g(m, n) = std::polar(amp, -2.0 * kPi * d / lam);
      dist_sum += d;
    }
  }
  const double delay = dist_sum / (M * N) / kSpeedOfLight;
  return TappedSiChannel({{delay, std::move(g)}}, M, N);
}

TappedSiChannel build_wall_reflection(const SiScenario& scenario) {
  scenario.validate();
  if (!scenario.include_clutter) throw std::invalid_argument("clutter disabled in scenario");
  const auto& tx = scenario.tx_array;
  const auto& rx = scenario.rx_array;
  const double lam = tx.carrier_wavelength;
  const int M = rx.num_elements, N = tx.num_elements;

  const double az = deg2rad(scenario.wall_azimuth);
  const Eigen::Vector3d nrm(std::cos(az), std::sin(az), 0.0);
  const Eigen::Vector3d ref = 0.5 * (tx.centroid(true) + rx.centroid(false));
  const double D = scenario.wall_distance;
  auto side = [&](const Eigen::Vector3d& p) { return (p - ref).dot(nrm) - D; };
  for (int n = 0; n < N; ++n)
    if (side(tx.element_position(n, true)) >= 0.0)
      throw std::invalid_argument("wall plane intersects the TX array");
  for (int m = 0; m < M; ++m)
    if (side(rx.element_position(m, false)) >= 0.0)
      throw std::invalid_argument("wall plane intersects the RX array");

  CMat g(M, N);
  double len_sum = 0.0;
  for (int m = 0; m < M; ++m) {
    const Eigen::Vector3d r = rx.element_position(m, false);
    for (int n = 0; n < N; ++n) {
      const Eigen::Vector3d t = tx.element_position(n, true);
      const Eigen::Vector3d image = t - 2.0 * side(t) * nrm;
      const Eigen::Vector3d v = r - image;
      const double d = v.norm();
      const Eigen::Vector3d v_dep = v - 2.0 * v.dot(nrm) * nrm;
      double amp = lam / (4.0 * kPi * d);
      if (scenario.element_pattern)
        amp *= element_amplitude(relative_azimuth_deg(v_dep, tx.boresight_azimuth)) *
               element_amplitude(relative_azimuth_deg(-v, rx.boresight_azimuth));
      g(m, n) = scenario.wall_reflection_coeff * std::polar(amp, -2.0 * kPi * d / lam);
      len_sum += d;
    }
  }
  const double delay = len_sum / (M * N) / kSpeedOfLight;
  return TappedSiChannel({{delay, std::move(g)}}, M, N);
}

TappedSiChannel build_si_channel(const SiScenario& scenario) {
  auto direct = build_direct_coupling(scenario);
  if (!scenario.include_clutter) return direct;
  return TappedSiChannel::merge(direct, build_wall_reflection(scenario));
}

TappedSiChannel build_radar_channel(const UlaGeometry& tx, const UlaGeometry& rx,
                                    const RadarTarget& target, double bandwidth) {
  tx.validate();
  rx.validate();
  if (!(target.range > 0)) throw std::invalid_argument("target range must be positive");
  if (target.rcs < 0) throw std::invalid_argument("target RCS must be nonnegative");
  if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be positive");
  const double lam = tx.carrier_wavelength;
  const double aperture = std::max((tx.num_elements - 1) * tx.element_spacing,
                                   (rx.num_elements - 1) * rx.element_spacing);
  if (target.range < 2.0 * aperture * aperture / lam)
    throw std::invalid_argument("target is not in the far field");

  const int M = rx.num_elements, N = tx.num_elements;
  const double th_tx = target.azimuth - tx.boresight_azimuth;
  const double th_rx = target.azimuth - rx.boresight_azimuth;
  const double R = target.range;
  const double amp = lam * std::sqrt(target.rcs) / (std::pow(4.0 * kPi, 1.5) * R * R) *
                     element_amplitude(th_tx) * element_amplitude(th_rx) *
                     std::sqrt(static_cast<double>(M) * N);
  auto steer = [](const UlaGeometry& g, double az_deg) {
    CVec a(g.num_elements);
    const double s = std::sin(deg2rad(az_deg)) * g.element_spacing / g.carrier_wavelength;
    for (int p = 0; p < g.num_elements; ++p) a(p) = std::polar(1.0, -2.0 * kPi * p * s);
    return CVec(a / std::sqrt(static_cast<double>(g.num_elements)));
  };
  const CVec a = steer(tx, th_tx);
  const CVec b = steer(rx, th_rx);
  CMat g = std::polar(amp, -2.0 * kPi * 2.0 * R / lam) * (b * a.adjoint());
  return TappedSiChannel({{2.0 * R / kSpeedOfLight, std::move(g)}}, M, N);
}

TappedSiChannel discretize(const TappedSiChannel& channel, double sample_interval,
                           double bandwidth, const DiscretizeOptions& opt) {
  if (!(sample_interval > 0)) throw std::invalid_argument("sample interval must be positive");
  if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be positive");
  const double bts = bandwidth * sample_interval;
  if (bts > 1.0 + 1e-12) throw std::invalid_argument("bandwidth exceeds the Nyquist rate");
  if (opt.half_width < 1) throw std::invalid_argument("kernel half-width must be positive");
  const int hw = opt.half_width;

  std::map<long, CMat> grid;
  for (const auto& tap : channel.taps()) {
    const double center = tap.delay / sample_interval + hw;
    const long lo = static_cast<long>(std::ceil(center - hw));
    const long hi = static_cast<long>(std::floor(center + hw));
    std::vector<std::pair<long, double>> kern;
    double energy = 0.0;
    for (long i = lo; i <= hi; ++i) {
      const double t = static_cast<double>(i) - center;
      if (std::abs(t) >= hw) continue;
      const double w = std::cos(kPi * t / (2.0 * hw));
      const double k = bts * sinc(bts * t) * w * w;
      if (k == 0.0) continue;
      kern.emplace_back(i, k);
      energy += k * k;
    }
    const double scale = std::sqrt(bts / energy);
    for (const auto& [i, k] : kern) {
      auto [it, fresh] = grid.try_emplace(i, k * scale * tap.gain);
      if (!fresh) it->second += k * scale * tap.gain;
    }
  }
  std::vector<Tap> taps;
  taps.reserve(grid.size());
  for (auto& [i, g] : grid) taps.push_back({static_cast<double>(i) * sample_interval, std::move(g)});
  return TappedSiChannel(std::move(taps), channel.rx_dim(), channel.tx_dim());
}

}  // namespace cissir
