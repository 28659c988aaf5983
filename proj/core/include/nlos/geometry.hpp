#pragma once

#include <cmath>

namespace nlos {

/// Planar point in meters.
struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double distance(Point2D a, Point2D b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline bool is_finite(Point2D p) noexcept {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

/// Unsigned area of the triangle spanned by three points.
inline double triangle_area(Point2D a, Point2D b, Point2D c) noexcept {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace nlos
