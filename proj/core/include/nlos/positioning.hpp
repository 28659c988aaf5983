#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlos/geometry.hpp"

// Planar ultrasonic trilateration by the radical-axis construction: the
// circle equations around three receivers are subtracted pairwise, and the
// resulting lines meet at the node position.
namespace nlos::positioning {

inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s, dry air at 20 C

/// Triangle area (m^2) below which three centers count as collinear.
inline constexpr double kCollinearAreaThreshold = 1e-9;

/// Distance (m) the third radical axis may miss the solved point.
inline constexpr double kConcurrencyTolerance = 1e-6;

struct UltrasonicReceiver {
  std::string receiver_id;
  Point2D position;
};

struct RangeMeasurement {
  std::string receiver_id;
  double tof = 0.0;  ///< seconds
};

struct Circle {
  Point2D center;
  double radius = 0.0;
};

/// The line a*x + b*y = c.
struct RadicalLine {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Signed distance from `p` to the line, in meters.
  double residual(Point2D p) const noexcept;
};

double tof_to_distance(double tof, double speed);

/// Subtracts the equation of `c2` from that of `c1`:
/// 2(x2-x1)x + 2(y2-y1)y = (d1^2 - d2^2) + (x2^2 - x1^2) + (y2^2 - y1^2).
/// Throws DegenerateConfiguration for coincident centers.
RadicalLine radical_axis(const Circle& c1, const Circle& c2);

/// Intersection of the radical axes of three circles. Solves the (1,2) and
/// (1,3) axes and checks the (2,3) axis passes within kConcurrencyTolerance.
/// Throws DegenerateConfiguration when the centers are collinear.
Point2D radical_center(const Circle& c1, const Circle& c2, const Circle& c3);

/// Position from three receivers and the measured distance to each.
Point2D trilaterate(std::span<const UltrasonicReceiver, 3> receivers,
                    std::span<const double, 3> distances);

/// Forward model of the ranging hardware: tof_i = |p - p_i| / speed plus
/// zero-mean Gaussian noise of `noise_sigma` seconds, clamped at zero.
/// Output order matches `receivers`; deterministic for a fixed seed.
std::vector<RangeMeasurement> simulate_ranging(Point2D true_position,
                                               std::span<const UltrasonicReceiver> receivers,
                                               double speed, double noise_sigma,
                                               std::uint64_t rng_seed);

}  // namespace nlos::positioning
