#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace cissir {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = std::numbers::pi;

inline double db20(double amplitude) { return 20.0 * std::log10(amplitude); }
inline double db10(double power) { return 10.0 * std::log10(power); }
inline double from_db20(double db) { return std::pow(10.0, db / 20.0); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace cissir
