#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "riesz/torus.hpp"

using namespace riesz;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<std::pair<double, double>> arcs_of(const MultibandSet& s) {
  std::vector<std::pair<double, double>> out;
  for (const Arc& a : s.arcs()) out.emplace_back(a.start, a.end);
  return out;
}

MultibandSet random_three_band(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> cuts;
  for (int i = 0; i < 6; ++i) cuts.push_back(u(rng) * kTwoPi);
  std::sort(cuts.begin(), cuts.end());
  return normalize_bands({{cuts[0], cuts[1]}, {cuts[2], cuts[3]}, {cuts[4], cuts[5]}});
}

}  // namespace

TEST_CASE("normalize_bands examples") {
  const MultibandSet half = normalize_bands({{0.0, pi}});
  REQUIRE(half.arcs().size() == 1);
  CHECK(half.arcs()[0] == Arc{0.0, pi});
  CHECK(half.measure() == doctest::Approx(pi));

  const MultibandSet wrap = normalize_bands({{1.5 * pi, 2.5 * pi}});
  REQUIRE(wrap.arcs().size() == 2);
  CHECK(wrap.arcs()[0].start == 0.0);
  CHECK(wrap.arcs()[0].end == doctest::Approx(pi / 2));
  CHECK(wrap.arcs()[1].start == doctest::Approx(1.5 * pi));
  CHECK(wrap.arcs()[1].end == kTwoPi);
  CHECK(wrap.measure() == doctest::Approx(pi));

  const MultibandSet merged = normalize_bands({{0.0, 1.0}, {0.5, 2.0}});
  REQUIRE(merged.arcs().size() == 1);
  CHECK(merged.arcs()[0] == Arc{0.0, 2.0});
  CHECK(merged.measure() == 2.0);

  // adjacent arcs merge; negative starts wrap
  CHECK(normalize_bands({{0.0, 1.0}, {1.0, 2.0}}).arcs().size() == 1);
  CHECK(normalize_bands({{-1.0, 1.0}}).arcs().size() == 2);
  CHECK(normalize_bands({{-1.0, 1.0}}).measure() == doctest::Approx(2.0));
}

TEST_CASE("normalize_bands errors") {
  CHECK_THROWS_AS(normalize_bands({}), std::invalid_argument);
  CHECK_THROWS_AS(normalize_bands({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(normalize_bands({{1.0, 1.0 + 1e-13}}), std::invalid_argument);
  CHECK_THROWS_AS(normalize_bands({{2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(normalize_bands({{0.0, 7.0}}), std::invalid_argument);
}

TEST_CASE("complement examples") {
  const MultibandSet c = complement(normalize_bands({{0.0, pi}}));
  REQUIRE(c.arcs().size() == 1);
  CHECK(c.arcs()[0].start == pi);
  CHECK(c.arcs()[0].end == kTwoPi);

  const MultibandSet comb = complement(normalize_bands({{0.0, pi / 2}, {pi, 1.5 * pi}}));
  REQUIRE(comb.arcs().size() == 2);
  CHECK(comb.arcs()[0] == Arc{pi / 2, pi});
  CHECK(comb.arcs()[1] == Arc{1.5 * pi, kTwoPi});

  CHECK_THROWS_AS(complement(full_torus()), std::invalid_argument);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const MultibandSet s = random_three_band(rng);
    CHECK(s.measure() + complement(s).measure() == doctest::Approx(kTwoPi).epsilon(1e-14));
  }
}

TEST_CASE("indicator_fourier examples") {
  CHECK(std::abs(indicator_fourier(full_torus(), 5)) < 1e-15);
  CHECK(indicator_fourier(full_torus(), 0) == std::complex<double>(kTwoPi, 0.0));

  const MultibandSet half = normalize_bands({{0.0, pi}});
  const auto q1 = oracle::fourier_quadrature({{0.0, pi}}, 1);
  const auto q2 = oracle::fourier_quadrature({{0.0, pi}}, 2);
  CHECK(std::abs(q1 - std::complex<double>(0.0, -2.0)) < 1e-13);
  CHECK(std::abs(q2) < 1e-13);
  CHECK(std::abs(indicator_fourier(half, 1) - q1) < 1e-13);
  CHECK(std::abs(indicator_fourier(half, 2) - q2) < 1e-13);
}

TEST_CASE("property: conjugate symmetry, modulus bound, zeroth coefficient") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const MultibandSet s = random_three_band(rng);
    CHECK(indicator_fourier(s, 0).real() == s.measure());
    for (long m = 1; m <= 300; m += 7) {
      const auto c = indicator_fourier(s, m);
      const auto cm = indicator_fourier(s, -m);
      CHECK(cm == std::conj(c));
      CHECK(std::abs(c) <= s.measure() + 1e-12);
    }
  }
}

TEST_CASE("property: closed form matches adaptive quadrature for |m| <= 256") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 6; ++i) {
    const MultibandSet s = random_three_band(rng);
    const auto arcs = arcs_of(s);
    for (long m = -256; m <= 256; m += (i % 2 ? 17 : 13)) {
      CHECK(std::abs(indicator_fourier(s, m) - oracle::fourier_quadrature(arcs, m)) < 1e-10);
    }
    CHECK(std::abs(indicator_fourier(s, 256) - oracle::fourier_quadrature(arcs, 256)) < 1e-10);
  }
}

TEST_CASE("property: translation covariance") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const MultibandSet s = random_three_band(rng);
    const double t0 = shift(rng);
    const MultibandSet moved = rotate(s, t0);
    for (long m = -40; m <= 40; ++m) {
      const auto expected = indicator_fourier(s, m) * std::polar(1.0, -static_cast<double>(m) * t0);
      CHECK(std::abs(indicator_fourier(moved, m) - expected) < 1e-12);
    }
  }
}

TEST_CASE("fractions of 2pi") {
  const MultibandSet s = normalize_bands_2pi({{0.0, 0.5}, {0.6, 0.9}});
  CHECK(s.normalized_measure() == doctest::Approx(0.8));
  CHECK(single_arc(0.45).measure() == doctest::Approx(0.45 * kTwoPi));
  CHECK(single_arc(1.0).is_full());
  CHECK_THROWS(single_arc(0.0));
}
