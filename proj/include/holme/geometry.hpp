#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace holme {

// World frame: meters, right-handed, +y up, ground plane y = 0,
// north = -z, east = +x.
using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Point2 = Eigen::Vector2d;

inline bool is_finite(const Point3& p) { return p.allFinite(); }

struct AABB {
  Point3 min;
  Point3 max;

  Point3 center() const { return 0.5 * (min + max); }
  Vec3 extents() const { return max - min; }
  double max_extent() const { return extents().maxCoeff(); }

  void expand(const Point3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }

  static AABB of_point(const Point3& p) { return {p, p}; }
};

// Distance from p to the segment [a, b]; falls back to |p - a| when a == b.
double point_segment_distance(const Point3& p, const Point3& a,
                              const Point3& b);

AABB bounds_of(std::span<const Point3> points);

}  // namespace holme
