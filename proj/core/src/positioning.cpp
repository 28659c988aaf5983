#include "nlos/positioning.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "nlos/errors.hpp"

namespace nlos::positioning {

double RadicalLine::residual(Point2D p) const noexcept {
  return (a * p.x + b * p.y - c) / std::hypot(a, b);
}

double tof_to_distance(double tof, double speed) {
  if (!(tof >= 0.0) || !std::isfinite(tof)) throw DomainError("time of flight must be >= 0");
  if (!(speed > 0.0) || !std::isfinite(speed)) throw DomainError("signal speed must be > 0");
  return tof * speed;
}

RadicalLine radical_axis(const Circle& c1, const Circle& c2) {
  const Point2D p1 = c1.center;
  const Point2D p2 = c2.center;
  if (p1 == p2) throw DegenerateConfiguration("radical axis of circles with coincident centers");
  return RadicalLine{
      2.0 * (p2.x - p1.x),
      2.0 * (p2.y - p1.y),
      (c1.radius * c1.radius - c2.radius * c2.radius) + (p2.x * p2.x - p1.x * p1.x) +
          (p2.y * p2.y - p1.y * p1.y),
  };
}

Point2D radical_center(const Circle& c1, const Circle& c2, const Circle& c3) {
  if (c1.center == c2.center || c1.center == c3.center || c2.center == c3.center) {
    throw DegenerateConfiguration("coincident circle centers");
  }
  if (triangle_area(c1.center, c2.center, c3.center) < kCollinearAreaThreshold) {
    throw DegenerateConfiguration("collinear centers: radical axes are parallel");
  }
  // The (2,3) axis is the difference of the other two, so it only serves as
  // a numerical check.
  const RadicalLine l12 = radical_axis(c1, c2);
  const RadicalLine l13 = radical_axis(c1, c3);
  const double det = l12.a * l13.b - l13.a * l12.b;
  const Point2D p{(l12.c * l13.b - l13.c * l12.b) / det, (l12.a * l13.c - l13.a * l12.c) / det};
  if (!is_finite(p)) throw DegenerateConfiguration("radical axes have no finite intersection");

  const RadicalLine l23 = radical_axis(c2, c3);
  if (std::abs(l23.residual(p)) > kConcurrencyTolerance) {
    throw DegenerateConfiguration("radical axes are not concurrent within tolerance");
  }
  return p;
}

Point2D trilaterate(std::span<const UltrasonicReceiver, 3> receivers,
                    std::span<const double, 3> distances) {
  for (double d : distances) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("distances must be >= 0");
  }
  return radical_center(Circle{receivers[0].position, distances[0]},
                        Circle{receivers[1].position, distances[1]},
                        Circle{receivers[2].position, distances[2]});
}

namespace {

// Box-Muller over raw 53-bit draws so the sequence is identical on every
// standard library (std::normal_distribution is implementation-defined).
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace

std::vector<RangeMeasurement> simulate_ranging(Point2D true_position,
                                               std::span<const UltrasonicReceiver> receivers,
                                               double speed, double noise_sigma,
                                               std::uint64_t rng_seed) {
  if (!(speed > 0.0) || !std::isfinite(speed)) throw DomainError("signal speed must be > 0");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw DomainError("noise sigma must be >= 0");
  }
  GaussianSource noise(rng_seed);
  std::vector<RangeMeasurement> out;
  out.reserve(receivers.size());
  for (const auto& receiver : receivers) {
    const double exact = distance(true_position, receiver.position) / speed;
    const double sample = noise.next();
    const double tof = noise_sigma > 0.0 ? exact + noise_sigma * sample : exact;
    out.push_back({receiver.receiver_id, tof < 0.0 ? 0.0 : tof});
  }
  return out;
}

}  // namespace nlos::positioning
