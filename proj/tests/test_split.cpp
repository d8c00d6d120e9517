#include <catch2/catch_amalgamated.hpp>

#include "cissir/cissir.hpp"
#include "support.hpp"

using namespace cissir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// V S V^H = (S^H S)^(1/2) and U S U^H = (S S^H)^(1/2), computed without an SVD.
CMat psd_sqrt(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (a + a.adjoint()));
  RVec s = es.eigenvalues();
  const double cut = 1e-12 * s.cwiseAbs().maxCoeff();
  for (auto& x : s) x = x > cut ? std::sqrt(x) : 0.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("integral split of a rank-one tap") {
  std::mt19937_64 rng(2);
  const CVec u = testing::random_unit(4, rng), v = testing::random_unit(3, rng);
  const double sigma = 0.37;
  TappedSiChannel ch({{0.0, sigma * u * v.adjoint()}}, 4, 3);
  const auto g = integral_split(ch);
  CHECK((g.g_tx - sigma * v * v.adjoint()).norm() < 1e-14);
  CHECK((g.g_rx - sigma * u * u.adjoint()).norm() < 1e-14);

  const Codebook c(u, Mode::Tapered), w(v, Mode::Tapered);
  CHECK_THAT(split_bound(c, w, g), WithinRel(max_si(c, w, ch), 1e-12));
}

TEST_CASE("integral split of a zero channel") {
  TappedSiChannel ch({{0.0, CMat::Zero(3, 2)}}, 3, 2);
  const auto g = integral_split(ch);
  CHECK(g.g_tx.norm() == 0.0);
  CHECK(g.g_rx.norm() == 0.0);
  std::mt19937_64 rng(1);
  CHECK(split_bound(testing::random_codebook(3, 2, rng), testing::random_codebook(2, 2, rng), g) == 0.0);
}

TEST_CASE("integral split matches per-tap matrix square roots") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ch = testing::random_channel(5, 3, 1 + trial % 4, rng);
    CMat tx = CMat::Zero(3, 3), rx = CMat::Zero(5, 5);
    for (const auto& t : ch.taps()) {
      tx += psd_sqrt(t.gain.adjoint() * t.gain);
      rx += psd_sqrt(t.gain * t.gain.adjoint());
    }
    const auto g = integral_split(ch);
    CHECK((g.g_tx - tx).norm() < 1e-10 * tx.norm());
    CHECK((g.g_rx - rx).norm() < 1e-10 * rx.norm());
    // Both grams carry the nuclear norms of the taps.
    CHECK_THAT(g.g_tx.trace().real(), WithinRel(g.g_rx.trace().real(), 1e-12));
    CHECK((g.g_tx - g.g_tx.adjoint()).norm() == 0.0);
  }
}

TEST_CASE("split grams scale linearly with the channel") {
  std::mt19937_64 rng(9);
  const auto ch = testing::random_channel(4, 4, 2, rng);
  std::vector<Tap> scaled;
  for (const auto& t : ch.taps()) scaled.push_back({t.delay, 3.0 * t.gain});
  const auto a = integral_split(ch);
  const auto b = integral_split(TappedSiChannel(scaled, 4, 4));
  CHECK((b.g_tx - 3.0 * a.g_tx).norm() < 1e-12 * b.g_tx.norm());
  CHECK((b.g_rx - 3.0 * a.g_rx).norm() < 1e-12 * b.g_rx.norm());
}

TEST_CASE("split bound dominates max-SI on random draws") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ch = testing::random_channel(4, 5, 2, rng);
    const auto c = testing::random_codebook(4, 3, rng), w = testing::random_codebook(5, 6, rng);
    CHECK(split_bound(c, w, integral_split(ch)) - max_si(c, w, ch) >= -1e-12);
  }
}

TEST_CASE("quadratic form clamps rounding negatives") {
  CMat g = CMat::Zero(2, 2);
  g(0, 0) = -1e-18;
  CVec v(2);
  v << 1.0, 0.0;
  CHECK(quad_form(g, v) == 0.0);
  g(0, 0) = 2.5;
  CHECK_THAT(quad_form(g, v), WithinAbs(2.5, 1e-15));
}
