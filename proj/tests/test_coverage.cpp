#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlos/coverage.hpp"
#include "nlos/errors.hpp"

using namespace nlos;
using namespace nlos::coverage;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Direct evaluation, written with exp of the positive exponent.
double power_oracle(double ir, double w, double r) {
  return ir * kPi * w * w * std::exp(2.0 * r * r / (w * w)) / 2.0;
}

// Minimises required power over W by a coarse scan refined three times.
double scan_optimal_w(double r) {
  double lo = 1e-3, hi = 10.0 * r + 1.0;
  double best = lo;
  for (int pass = 0; pass < 4; ++pass) {
    double best_p = INFINITY;
    const double step = (hi - lo) / 2000.0;
    for (int i = 0; i <= 2000; ++i) {
      const double w = lo + i * step;
      const double p = power_oracle(1.0, w, r);
      if (p < best_p) {
        best_p = p;
        best = w;
      }
    }
    lo = std::max(1e-6, best - step);
    hi = best + step;
  }
  return best;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("required_launch_power examples") {
  CHECK(required_launch_power(1, 1, 0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(required_launch_power(1, 1, 1) == doctest::Approx(kPi * kE * kE / 2).epsilon(1e-14));
  CHECK(required_launch_power(1, 1, 1) == doctest::Approx(11.6067021787).epsilon(1e-10));
  CHECK(required_launch_power(1, std::sqrt(2.0), 1) == doctest::Approx(kPi * kE).epsilon(1e-14));
  CHECK(required_launch_power(1, std::sqrt(2.0), 1) == doctest::Approx(8.53973422267).epsilon(1e-10));
}

TEST_CASE("required_launch_power rejects bad inputs") {
  CHECK_THROWS_AS(required_launch_power(0, 1, 1), DomainError);
  CHECK_THROWS_AS(required_launch_power(-1, 1, 1), DomainError);
  CHECK_THROWS_AS(required_launch_power(1, 0, 1), DomainError);
  CHECK_THROWS_AS(required_launch_power(1, 1, -0.1), DomainError);
}

TEST_CASE("max_cell_radius examples and errors") {
  CHECK(max_cell_radius(0, 1) == 0.0);
  CHECK(max_cell_radius(kPi * kE, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(max_cell_radius(4 * kPi * kE, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(max_cell_radius(4.0, 3.0) == doctest::Approx(2 * max_cell_radius(1.0, 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(max_cell_radius(-1, 1), DomainError);
  CHECK_THROWS_AS(max_cell_radius(1, 0), DomainError);
}

TEST_CASE("irradiance_at examples") {
  CHECK(irradiance_at({kPi / 2, 1}, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(irradiance_at({kPi * kE * kE / 2, 1}, 1) == doctest::Approx(1.0).epsilon(1e-14));
  const double far = irradiance_at({1, 1}, 10);
  CHECK(far < 1e-80);
  CHECK(far >= 0.0);
  CHECK_THROWS_AS(irradiance_at({1, 1}, -1), DomainError);
  CHECK_THROWS_AS(irradiance_at({0, 1}, 0), DomainError);
}

TEST_CASE("optimal_beam_radius matches a numeric scan of the power formula") {
  CHECK(optimal_beam_radius(0) == 0.0);
  CHECK(optimal_beam_radius(1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(optimal_beam_radius(3) == doctest::Approx(3 * std::sqrt(2.0)));
  CHECK(scan_optimal_w(1.0) == doctest::Approx(1.41421).epsilon(1e-5));
  CHECK(scan_optimal_w(3.0) == doctest::Approx(4.24264).epsilon(1e-5));
  CHECK(optimal_beam_radius(1) == doctest::Approx(scan_optimal_w(1.0)).epsilon(1e-5));
  CHECK(optimal_beam_radius(3) == doctest::Approx(scan_optimal_w(3.0)).epsilon(1e-5));
}

TEST_CASE("optimal beam radius gives the max-radius power") {
  for (double ir : {0.01, 1.0, 7.5}) {
    for (double r : {0.2, 1.0, 2.5}) {
      CHECK(rel(required_launch_power(ir, optimal_beam_radius(r), r), ir * kPi * kE * r * r) <
            1e-13);
    }
  }
}

TEST_CASE("is_connected threshold") {
  const GaussianBeam beam{kPi * kE * kE / 2, 1};
  const ReceiverSpec rx{1.0, std::nullopt};
  CHECK(is_connected(beam, rx, 0.5));
  CHECK(is_connected(beam, rx, 1.0));
  CHECK_FALSE(is_connected(beam, rx, 2.0));
  CHECK_FALSE(received_power(beam, rx, 0.5).has_value());
  const ReceiverSpec with_area{1.0, 1e-4};
  CHECK(*received_power(beam, with_area, 0.0) == doctest::Approx(irradiance_at(beam, 0) * 1e-4));
}

TEST_CASE("boundary equality counts as connected") {
  // 2 * (pi/2) / pi is exact, so irradiance on axis is exactly 1.
  const GaussianBeam beam{kPi / 2, 1};
  REQUIRE(irradiance_at(beam, 0) == 1.0);
  CHECK(is_connected(beam, ReceiverSpec{1.0, std::nullopt}, 0));
  CHECK_FALSE(is_connected(beam, ReceiverSpec{std::nextafter(1.0, 2.0), std::nullopt}, 0));
}

TEST_CASE("validation of beam and receiver") {
  CHECK_THROWS_AS(GaussianBeam({-1, 1}).validate(), DomainError);
  CHECK_THROWS_AS(ReceiverSpec({1.0, 0.0}).validate(), DomainError);
  CHECK_NOTHROW(ReceiverSpec({1.0, 2.0}).validate());
}

TEST_CASE("property: round trip, inversion, minimality, monotonicity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ir_d(1e-3, 10), w_d(0.2, 5), r_d(0, 5), p_d(1e-3, 100);
  for (int i = 0; i < 500; ++i) {
    const double ir = ir_d(rng), w = w_d(rng), r = std::min(r_d(rng), 4 * w);
    const double p = required_launch_power(ir, w, r);
    CHECK(rel(p, power_oracle(ir, w, r)) < 1e-12);
    CHECK(rel(irradiance_at({p, w}, r), ir) < 1e-12);

    const double pw = p_d(rng);
    const double rmax = max_cell_radius(pw, ir);
    CHECK(rel(required_launch_power(ir, optimal_beam_radius(rmax), rmax), pw) < 1e-12);

    const double r2 = 0.1 + r;
    const double best = required_launch_power(ir, r2 * std::sqrt(2.0), r2);
    for (double f : {0.5, 0.9, 0.999, 1.001, 1.1, 2.0}) {
      CHECK(required_launch_power(ir, f * r2 * std::sqrt(2.0), r2) > best);
    }
    CHECK(irradiance_at({p, w}, r + 0.01) < irradiance_at({p, w}, r));
    CHECK(required_launch_power(ir, w, r + 0.01) > p);
  }
}
