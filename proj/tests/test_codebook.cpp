#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cissir/cissir.hpp"
#include "support.hpp"

using namespace cissir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("steering vectors") {
  const auto g = half_wavelength_ula(8, 28e9);
  const double amp = 1.0 / std::sqrt(8.0);
  SECTION("broadside is flat") {
    const CVec a = steering_vector(g, 0.0);
    for (int p = 0; p < 8; ++p) CHECK(std::abs(a(p) - cd(amp, 0.0)) < 1e-15);
  }
  SECTION("endfire alternates sign") {
    const CVec a = steering_vector(g, 90.0);
    for (int p = 0; p < 8; ++p) CHECK(std::abs(a(p) - cd(p % 2 ? -amp : amp, 0.0)) < 1e-12);
  }
  SECTION("unit norm at any angle") {
    for (double th = -89.0; th < 90.0; th += 7.3)
      CHECK_THAT(std::abs(steering_vector(g, th).squaredNorm()), WithinRel(1.0, 1e-12));
  }
}

TEST_CASE("oversampled DFT reference codebook") {
  SECTION("8 antennas, 4x oversampling, 120 degree sector has 27 beams") {
    const Codebook cb = dft_reference(8, 4, 120.0);
    CHECK(cb.beams() == 27);
    const auto angles = dft_reference_angles(8, 4, 120.0);
    REQUIRE(angles.size() == 27);
    CHECK_THAT(angles.front(), WithinAbs(-std::asin(13.0 / 16.0) * 180.0 / kPi, 1e-9));
    CHECK_THAT(angles.back(), WithinAbs(54.34, 0.01));
    // Beam centers steer to their listed angles.
    const auto g = half_wavelength_ula(8, 28e9);
    for (int j = 0; j < cb.beams(); ++j)
      CHECK_THAT(std::abs(steering_vector(g, angles[j]).dot(cb.column(j))), WithinAbs(1.0, 1e-12));
  }
  SECTION("critically sampled full circle is an orthonormal DFT basis") {
    const Codebook cb = dft_reference(8, 1, 360.0);
    REQUIRE(cb.beams() == 8);
    const CMat gram = cb.entries().adjoint() * cb.entries();
    CHECK((gram - CMat::Identity(8, 8)).norm() < 1e-12);
  }
  SECTION("entries are constant modulus") {
    const Codebook cb = dft_reference(16, 2, 90.0);
    CHECK((cb.entries().array().abs() - 0.25).abs().maxCoeff() < 1e-12);
    CHECK_NOTHROW(cb.as_mode(Mode::Phased));
  }
}

TEST_CASE("codebook invariants") {
  CMat e = CMat::Zero(2, 1);
  e(0, 0) = 1.0;
  CHECK_NOTHROW(Codebook(e, Mode::Tapered));
  CHECK_THROWS_AS(Codebook(e, Mode::Phased), std::invalid_argument);
  CHECK_THROWS_AS(Codebook(2.0 * e, Mode::Tapered), std::invalid_argument);
  CHECK(mode_from_string("phased") == Mode::Phased);
  CHECK(to_string(Mode::Tapered) == "tapered");
  CHECK_THROWS_AS(mode_from_string("hybrid"), std::invalid_argument);
}

TEST_CASE("max-SI") {
  std::mt19937_64 rng(11);
  SECTION("aligned rank-one tap is 0 dB") {
    const CVec u = testing::random_unit(4, rng), v = testing::random_unit(5, rng);
    TappedSiChannel ch({{0.0, u * v.adjoint()}}, 4, 5);
    CHECK_THAT(max_si(Codebook(u, Mode::Tapered), Codebook(v, Mode::Tapered), ch), WithinAbs(1.0, 1e-12));
  }
  SECTION("two taps add in magnitude") {
    const CMat g1 = testing::random_matrix(3, 3, rng), g2 = testing::random_matrix(3, 3, rng);
    const CVec c = testing::random_unit(3, rng), w = testing::random_unit(3, rng);
    TappedSiChannel ch({{0.0, g1}, {1e-9, g2}}, 3, 3);
    const double want = std::abs(c.dot(g1 * w)) + std::abs(c.dot(g2 * w));
    CHECK_THAT(max_si(Codebook(c, Mode::Tapered), Codebook(w, Mode::Tapered), ch), WithinRel(want, 1e-12));
  }
  SECTION("zero channel") {
    TappedSiChannel ch({{0.0, CMat::Zero(3, 3)}}, 3, 3);
    const auto cb = testing::random_codebook(3, 4, rng);
    CHECK(max_si(cb, cb, ch) == 0.0);
  }
  SECTION("matches the longhand double sum") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ch = testing::random_channel(4, 6, 3, rng);
      const auto c = testing::random_codebook(4, 5, rng), w = testing::random_codebook(6, 7, rng);
      CHECK_THAT(max_si(c, w, ch), WithinRel(testing::brute_max_si(c.entries(), w.entries(), ch), 1e-12));
    }
  }
  SECTION("dimension mismatch") {
    const auto ch = testing::random_channel(4, 6, 1, rng);
    const auto cb = testing::random_codebook(4, 2, rng);
    CHECK_THROWS_AS(max_si(cb, cb, ch), std::invalid_argument);
  }
}

TEST_CASE("codebook deviation") {
  std::mt19937_64 rng(5);
  const auto ref = testing::random_codebook(6, 4, rng);
  CHECK(codebook_deviation(ref, ref) == 0.0);
  CHECK_THAT(codebook_deviation(Codebook(-ref.entries(), Mode::Tapered), ref), WithinRel(4.0, 1e-12));
  CMat a = CMat::Zero(2, 1), b = CMat::Zero(2, 1);
  a(0, 0) = 1.0;
  b(1, 0) = cd(0.0, 1.0);
  CHECK_THAT(codebook_deviation(Codebook(b, Mode::Tapered), Codebook(a, Mode::Tapered)), WithinRel(2.0, 1e-12));
}

TEST_CASE("Frobenius SI") {
  std::mt19937_64 rng(8);
  const CVec c = testing::random_unit(3, rng), w = testing::random_unit(3, rng);
  CHECK_THAT(frobenius_si(Codebook(c, Mode::Tapered), Codebook(w, Mode::Tapered), c * w.adjoint()),
             WithinRel(1.0, 1e-12));
  const auto cb = testing::random_codebook(2, 2, rng);
  CHECK(frobenius_si(cb, cb, CMat::Zero(2, 2)) == 0.0);
  const CMat h = testing::random_matrix(2, 2, rng);
  const auto cc = testing::random_codebook(2, 2, rng), ww = testing::random_codebook(2, 2, rng);
  double want = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      cd s = 0.0;
      for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) s += std::conj(cc.entries()(m, k)) * h(m, n) * ww.entries()(n, l);
      want += std::norm(s);
    }
  CHECK_THAT(frobenius_si(cc, ww, h), WithinRel(want, 1e-12));
}

TEST_CASE("beam gain pattern") {
  const auto g = half_wavelength_ula(8, 28e9);
  const Codebook cb = dft_reference(8, 1, 360.0);
  const auto centers = dft_reference_angles(8, 1, 360.0);
  for (int j = 0; j < cb.beams(); ++j) {
    const auto bp = beam_gain_pattern(cb, j, g, centers, false);
    for (int i = 0; i < cb.beams(); ++i) {
      if (i == j) CHECK_THAT(bp.gains_db[i], WithinAbs(10.0 * std::log10(8.0), 1e-9));
      else CHECK(bp.gains_db[i] <= -100.0);
    }
  }
  const Codebook ref = dft_reference(8, 4, 120.0);
  const auto plain = beam_gain_pattern(ref, 3, g, {65.0, 0.0}, false);
  const auto shaped = beam_gain_pattern(ref, 3, g, {65.0, 0.0}, true);
  CHECK_THAT(shaped.gains_db[0] - plain.gains_db[0], WithinAbs(-12.0, 1e-9));
  CHECK_THAT(shaped.gains_db[1] - plain.gains_db[1], WithinAbs(0.0, 1e-12));
  CHECK_THROWS_AS(beam_gain_pattern(ref, 27, g, {0.0}, false), std::out_of_range);
}
