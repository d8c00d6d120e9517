#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cissir/types.hpp"

namespace cissir {

struct UlaGeometry {
  int num_elements = 8;
  double element_spacing = 0.0;    // m
  double carrier_wavelength = 0.0; // m
  Eigen::Vector3d origin_offset = Eigen::Vector3d::Zero();
  double boresight_azimuth = 0.0;  // deg

  void validate() const;
  // Receive arrays advance along (sin b, -cos b, 0), transmit arrays along the
  // opposite direction, so that steering vector a(theta) points both a TX beam
  // (a^H w) and an RX combiner (c^H b) toward +theta.
  Eigen::Vector3d axis(bool transmit) const;
  Eigen::Vector3d element_position(int p, bool transmit) const;
  Eigen::Vector3d centroid(bool transmit) const;
};

// Half-wavelength ULA at the given carrier.
UlaGeometry half_wavelength_ula(int num_elements, double carrier_hz);

struct SiScenario {
  UlaGeometry tx_array;
  UlaGeometry rx_array;
  double tx_rx_separation = 0.0;  // m, gap between last TX and first RX element
  double wall_distance = 4.0;     // m
  double wall_azimuth = 65.0;     // deg, direction of the wall normal
  cd wall_reflection_coeff{0.7, 0.0};
  bool include_clutter = true;
  bool element_pattern = true;    // TR 38.901 pattern at both ends of every SI path

  void validate() const;
};

// Mirrored collinear arrays: TX element 0 at the origin, RX element 0 at
// distance tx_rx_separation from it, both arrays extending away from each other.
SiScenario default_scenario(int n_tx = 8, int m_rx = 8, double carrier_hz = 28e9);

struct Tap {
  double delay = 0.0;  // s
  CMat gain;           // M x N
};

class TappedSiChannel {
 public:
  TappedSiChannel(std::vector<Tap> taps, int rx_dim, int tx_dim);

  const std::vector<Tap>& taps() const { return taps_; }
  int rx_dim() const { return rx_dim_; }
  int tx_dim() const { return tx_dim_; }
  std::size_t size() const { return taps_.size(); }

  // Combines two channels; taps with equal delay are summed.
  static TappedSiChannel merge(const TappedSiChannel& a, const TappedSiChannel& b);

  // Sum over taps of squared Frobenius norms.
  double energy() const;

 private:
  std::vector<Tap> taps_;
  int rx_dim_;
  int tx_dim_;
};

struct RadarTarget {
  double azimuth = -39.0;  // deg
  double range = 40.0;     // m
  double rcs = 1.0;        // m^2
};

// TR 38.901 horizontal element pattern in dB. peak_gain_db is added at boresight.
double element_gain_db(double phi_deg, double peak_gain_db = 0.0);
inline constexpr double kElementPeakGainDb = 8.0;

TappedSiChannel build_direct_coupling(const SiScenario& scenario);
TappedSiChannel build_wall_reflection(const SiScenario& scenario);
// Direct coupling plus the wall path when clutter is enabled.
TappedSiChannel build_si_channel(const SiScenario& scenario);

TappedSiChannel build_radar_channel(const UlaGeometry& tx, const UlaGeometry& rx,
                                    const RadarTarget& target, double bandwidth);

struct DiscretizeOptions {
  int half_width = 16;
};

// Fixed latency (in samples) discretize adds so every kernel tap has delay >= 0.
inline int kernel_latency_samples(const DiscretizeOptions& opt = {}) { return opt.half_width; }

TappedSiChannel discretize(const TappedSiChannel& channel, double sample_interval,
                           double bandwidth, const DiscretizeOptions& opt = {});

}  // namespace cissir
