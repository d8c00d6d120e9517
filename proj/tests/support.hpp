#pragma once

// Shared generators and brute-force oracles for the test programs. Nothing here
// calls into the solver code it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cissir/cissir.hpp"

namespace testing {

using cissir::cd;
using cissir::CMat;
using cissir::CVec;
using cissir::RVec;

inline CVec random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

inline CVec random_unit(int n, std::mt19937_64& rng) {
  CVec v = random_complex(n, rng);
  return v / v.norm();
}

inline CMat random_matrix(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return a;
}

// PSD with the given rank (full rank when rank >= n).
inline CMat random_psd(int n, int rank, std::mt19937_64& rng) {
  const CMat a = random_matrix(n, std::min(rank, n), rng);
  CMat g = a * a.adjoint() / static_cast<double>(n);
  return 0.5 * (g + g.adjoint());
}

inline CVec random_phased(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * cissir::kPi);
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), u(rng));
  return v;
}

inline cissir::Codebook random_codebook(int p, int j, std::mt19937_64& rng) {
  CMat e(p, j);
  for (int c = 0; c < j; ++c) e.col(c) = random_unit(p, rng);
  return cissir::Codebook(e, cissir::Mode::Tapered);
}

inline cissir::TappedSiChannel random_channel(int m, int n, int taps, std::mt19937_64& rng) {
  std::vector<cissir::Tap> t;
  for (int i = 0; i < taps; ++i) t.push_back({i * 1e-9, random_matrix(m, n, rng)});
  return cissir::TappedSiChannel(std::move(t), m, n);
}

inline double quad(const CMat& g, const CVec& z) { return z.dot(g * z).real(); }

// Euclidean projection onto the probability simplex (sort-based).
inline RVec project_simplex(const RVec& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

// Projection onto {s : s >= 0, sum s = 1, a.s <= b} by Dykstra's alternating scheme.
inline RVec project_polytope(const RVec& v, const RVec& a, double b, int iters = 200) {
  RVec x = v, p = RVec::Zero(v.size()), q = RVec::Zero(v.size());
  for (int k = 0; k < iters; ++k) {
    const RVec y = project_simplex(x + p);
    p = x + p - y;
    RVec z = y + q;
    const double excess = a.dot(z) - b;
    if (excess > 0.0) z -= excess / a.squaredNorm() * a;
    q = y + q - z;
    x = z;
  }
  return x;
}

// Projected-gradient oracle for max Re(r^H z) s.t. ||z|| = 1, z^H G z <= eps.
// In the eigenbasis of G with phases aligned to r the problem becomes the concave
// program max sum_p |r_p| sqrt(s_p) over the polytope {s >= 0, sum s = 1, sigma.s <= eps}.
// Returns the best objective over the restarts.
inline double tapered_oracle(const CVec& r, const CMat& g, double eps, int restarts,
                             std::mt19937_64& rng) {
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  const RVec sigma = es.eigenvalues();
  const RVec a = (es.eigenvectors().adjoint() * r).cwiseAbs();
  const int n = static_cast<int>(r.size());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double best = -1.0;
  for (int k = 0; k < restarts; ++k) {
    RVec s(n);
    for (int i = 0; i < n; ++i) s(i) = u(rng);
    s = project_polytope(s, sigma, eps);
    for (int it = 1; it <= 400; ++it) {
      RVec grad(n);
      for (int i = 0; i < n; ++i) grad(i) = a(i) / (2.0 * std::sqrt(std::max(s(i), 1e-12)));
      s = project_polytope(s + (0.05 / std::sqrt(static_cast<double>(it))) * grad / grad.norm(), sigma, eps, 60);
    }
    s = project_simplex(project_polytope(s, sigma, eps, 2000));
    // Pull leftover violation onto the boundary by mixing in the least-SI vertex.
    const double over = sigma.dot(s) - eps;
    if (over > 0.0) {
      const double t = over / (sigma.dot(s) - sigma(0));
      s *= 1.0 - t;
      s(0) += t;
    }
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += a(i) * std::sqrt(std::max(s(i), 0.0));
    best = std::max(best, obj);
  }
  return best;
}

// Random unit vectors pushed onto the feasible set {z^H G z <= eps} by bisection
// toward the least-SI eigenvector. Returns Re(r^H z) for each.
inline std::vector<double> random_feasible_objectives(const CVec& r, const CMat& g, double eps,
                                                      int count, std::mt19937_64& rng) {
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  const CVec q0 = es.eigenvectors().col(0);
  std::vector<double> out;
  out.reserve(count);
  const int n = static_cast<int>(r.size());
  for (int k = 0; k < count; ++k) {
    const CVec u = random_unit(n, rng);
    auto at = [&](double t) {
      CVec z = (1.0 - t) * u + t * q0;
      return CVec(z / z.norm());
    };
    CVec z = u;
    if (quad(g, z) > eps) {
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (quad(g, at(mid)) > eps) lo = mid;
        else hi = mid;
      }
      z = at(hi);
      if (quad(g, z) > eps) continue;
    }
    out.push_back(r.dot(z).real());
    // Phase-rotated copy: the best rotation of the same point.
    const cd inner = r.dot(z);
    if (std::abs(inner) > 0.0) out.push_back(std::abs(inner));
  }
  return out;
}

// Exhaustive phase grid for P = 3 constant-modulus vectors (first entry fixed real):
// best |r^H z| with z^H G z <= eps, or -1 when no grid point is feasible.
inline double phase_grid_oracle(const CVec& r, const CMat& g, double eps, int steps = 64) {
  const double amp = 1.0 / std::sqrt(3.0);
  double best = -1.0;
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < steps; ++j) {
      CVec z(3);
      z << amp, std::polar(amp, 2.0 * cissir::kPi * i / steps), std::polar(amp, 2.0 * cissir::kPi * j / steps);
      if (quad(g, z) <= eps) best = std::max(best, std::abs(r.dot(z)));
    }
  return best;
}

// Max SI by the double sum over beam pairs and taps, written out longhand.
inline double brute_max_si(const CMat& c, const CMat& w, const cissir::TappedSiChannel& ch) {
  double best = 0.0;
  for (int k = 0; k < c.cols(); ++k)
    for (int l = 0; l < w.cols(); ++l) {
      double acc = 0.0;
      for (const auto& t : ch.taps()) {
        cd s = 0.0;
        for (int m = 0; m < t.gain.rows(); ++m)
          for (int n = 0; n < t.gain.cols(); ++n) s += std::conj(c(m, k)) * t.gain(m, n) * w(n, l);
        acc += std::abs(s);
      }
      best = std::max(best, acc);
    }
  return best;
}

}  // namespace testing
