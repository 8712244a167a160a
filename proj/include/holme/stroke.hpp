#pragma once

#include "holme/geometry.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace holme {

/// Default RDP tolerance applied to captured strokes, in meters.
inline constexpr double kDefaultSimplifyEpsilon = 0.002;
/// Default workspace edge length, in meters.
inline constexpr double kDefaultWorkspaceSize = 0.5;

enum class StrokeMode { kFreehand, kLine };
enum class MirrorPlane { kLeftRight, kFrontBack };

struct MirrorRef {
  std::string source_id;
  MirrorPlane plane;

  bool operator==(const MirrorRef&) const = default;
};

struct Stroke {
  std::string id;
  StrokeMode mode = StrokeMode::kFreehand;
  std::vector<Point3> points;
  std::vector<double> timestamps;
  std::optional<MirrorRef> mirror_of;

  bool operator==(const Stroke&) const = default;
};

/// Calibrated cubic drawing volume. The local frame is the world frame
/// rotated by `yaw` about +y and translated to `origin`; the cube occupies
/// [0, size]^3 in local coordinates with local +x running along the front
/// edge from the left corner to the right corner.
struct Workspace {
  Point3 origin = Point3::Zero();
  double size = kDefaultWorkspaceSize;
  double yaw = 0.0;

  Eigen::Matrix3d rotation() const;
  Point3 to_local(const Point3& world) const;
  Point3 to_world(const Point3& local) const;

  bool operator==(const Workspace&) const = default;
};

struct Sketch {
  std::vector<Stroke> strokes;
  Workspace workspace;

  const Stroke* find(const std::string& id) const;
  bool operator==(const Sketch&) const = default;
};

struct CubicSegment {
  std::array<Point3, 4> control;

  Point3 evaluate(double t) const;
};

struct PolyBezier {
  std::vector<CubicSegment> segments;

  // Global parameter u in [0, segments.size()].
  Point3 evaluate(double u) const;
};

/// Builds a workspace whose front edge runs from `left` to `right`.
/// Throws DegenerateCorners when the corners are horizontally coincident.
Workspace workspace_from_corners(const Point3& left, const Point3& right,
                                 double size);

/// Ramer-Douglas-Peucker on 3D point-to-segment distance. Points farther than
/// `epsilon` from the current chord are kept; both endpoints always survive.
std::vector<Point3> simplify_stroke(std::span<const Point3> points,
                                    double epsilon);

/// Same as simplify_stroke but returns the indices of the retained points.
std::vector<std::size_t> simplify_indices(std::span<const Point3> points,
                                          double epsilon);

/// C1 interpolating cubic chain through `points`. Interior tangents are
/// central differences; end tangents use the parabolic end condition.
PolyBezier fit_poly_bezier(std::span<const Point3> points);

Stroke mirror_stroke(const Stroke& stroke, MirrorPlane plane,
                     const Workspace& workspace);

/// Lattice over the workspace cube, x/z spaced by `spacing_h`, y by
/// `spacing_v`, returned in world coordinates.
std::vector<Point3> grid_points(const Workspace& workspace, double spacing_h,
                                double spacing_v);

/// Turns raw controller samples into a stored stroke: RDP for freehand
/// input, endpoints only for line mode. Timestamps follow retained points.
Stroke capture_stroke(std::string id, StrokeMode mode,
                      std::span<const Point3> samples,
                      std::span<const double> timestamps,
                      double epsilon = kDefaultSimplifyEpsilon);

/// Checks the Stroke and Sketch invariants; throws InvalidArgument.
void validate(const Stroke& stroke);
void validate(const Sketch& sketch);

}  // namespace holme
