#include "holme/stroke.hpp"

#include "holme/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace holme {

Eigen::Matrix3d Workspace::rotation() const {
  return Eigen::AngleAxisd(yaw, Vec3::UnitY()).toRotationMatrix();
}

Point3 Workspace::to_local(const Point3& world) const {
  return rotation().transpose() * (world - origin);
}

Point3 Workspace::to_world(const Point3& local) const {
  return origin + rotation() * local;
}

const Stroke* Sketch::find(const std::string& id) const {
  for (const auto& s : strokes)
    if (s.id == id) return &s;
  return nullptr;
}

Point3 CubicSegment::evaluate(double t) const {
  const double s = 1.0 - t;
  return s * s * s * control[0] + 3.0 * s * s * t * control[1] +
         3.0 * s * t * t * control[2] + t * t * t * control[3];
}

Point3 PolyBezier::evaluate(double u) const {
  if (segments.empty()) throw Error(ErrorCode::kInvalidArgument, "empty curve");
  const double n = static_cast<double>(segments.size());
  u = std::clamp(u, 0.0, n);
  std::size_t i = static_cast<std::size_t>(std::floor(u));
  if (i >= segments.size()) i = segments.size() - 1;
  return segments[i].evaluate(u - static_cast<double>(i));
}

Workspace workspace_from_corners(const Point3& left, const Point3& right,
                                 double size) {
  if (!(size > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "workspace size must be > 0");
  const double dx = right.x() - left.x();
  const double dz = right.z() - left.z();
  if (std::hypot(dx, dz) < 1e-6)
    throw Error(ErrorCode::kDegenerateCorners,
                "corners are horizontally coincident");
  Workspace ws;
  // Heading measured counter-clockwise about +y: east = 0, north = pi/2.
  ws.yaw = std::atan2(-dz, dx) + 0.0;
  ws.size = size;
  ws.origin = Point3(left.x(), 0.5 * (left.y() + right.y()), left.z());
  return ws;
}

std::vector<std::size_t> simplify_indices(std::span<const Point3> points,
                                          double epsilon) {
  if (points.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "simplify needs >= 2 points");
  if (!(epsilon >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");

  std::vector<bool> keep(points.size(), false);
  keep.front() = keep.back() = true;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, points.size() - 1}};
  while (!stack.empty()) {
    const auto [first, last] = stack.back();
    stack.pop_back();
    double worst = -1.0;
    std::size_t split = first;
    for (std::size_t i = first + 1; i < last; ++i) {
      const double d = point_segment_distance(points[i], points[first], points[last]);
      if (d > worst) {
        worst = d;
        split = i;
      }
    }
    if (split != first && worst > epsilon) {
      keep[split] = true;
      stack.emplace_back(first, split);
      stack.emplace_back(split, last);
    }
  }

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i]) out.push_back(i);
  return out;
}

std::vector<Point3> simplify_stroke(std::span<const Point3> points,
                                    double epsilon) {
  std::vector<Point3> out;
  for (std::size_t i : simplify_indices(points, epsilon)) out.push_back(points[i]);
  return out;
}

PolyBezier fit_poly_bezier(std::span<const Point3> points) {
  const std::size_t n = points.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "fit needs >= 2 points");

  std::vector<Vec3> tangent(n);
  if (n == 2) {
    tangent[0] = tangent[1] = points[1] - points[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i)
      tangent[i] = 0.5 * (points[i + 1] - points[i - 1]);
    tangent[0] = 2.0 * (points[1] - points[0]) - tangent[1];
    tangent[n - 1] = 2.0 * (points[n - 1] - points[n - 2]) - tangent[n - 2];
  }

  PolyBezier curve;
  curve.segments.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    curve.segments.push_back({{points[i], points[i] + tangent[i] / 3.0,
                               points[i + 1] - tangent[i + 1] / 3.0,
                               points[i + 1]}});
  }
  return curve;
}

Stroke mirror_stroke(const Stroke& stroke, MirrorPlane plane,
                     const Workspace& workspace) {
  Stroke out = stroke;
  const int axis = plane == MirrorPlane::kLeftRight ? 0 : 2;
  for (auto& p : out.points) {
    Point3 local = workspace.to_local(p);
    local[axis] = workspace.size - local[axis];
    p = workspace.to_world(local);
  }
  out.id = stroke.id + (plane == MirrorPlane::kLeftRight ? "~lr" : "~fb");
  out.mirror_of = MirrorRef{stroke.id, plane};
  return out;
}

std::vector<Point3> grid_points(const Workspace& workspace, double spacing_h,
                                double spacing_v) {
  if (!(spacing_h > 0.0) || !(spacing_v > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "grid spacing must be > 0");
  // Tolerance absorbs representation error in size / spacing (0.5 / 0.1).
  auto count = [&](double spacing) {
    return static_cast<std::size_t>(std::floor(workspace.size / spacing + 1e-9)) + 1;
  };
  const std::size_t nh = count(spacing_h);
  const std::size_t nv = count(spacing_v);

  std::vector<Point3> out;
  out.reserve(nh * nh * nv);
  for (std::size_t j = 0; j < nv; ++j)
    for (std::size_t k = 0; k < nh; ++k)
      for (std::size_t i = 0; i < nh; ++i)
        out.push_back(workspace.to_world(
            Point3(std::min(i * spacing_h, workspace.size),
                   std::min(j * spacing_v, workspace.size),
                   std::min(k * spacing_h, workspace.size))));
  return out;
}

Stroke capture_stroke(std::string id, StrokeMode mode,
                      std::span<const Point3> samples,
                      std::span<const double> timestamps, double epsilon) {
  if (samples.size() != timestamps.size())
    throw Error(ErrorCode::kInvalidArgument, "samples/timestamps length mismatch");
  if (samples.size() < 2)
    throw Error(ErrorCode::kInvalidArgument, "a stroke needs >= 2 samples");

  std::vector<std::size_t> kept;
  if (mode == StrokeMode::kLine) {
    kept = {0, samples.size() - 1};
  } else {
    kept = simplify_indices(samples, epsilon);
  }

  Stroke s;
  s.id = std::move(id);
  s.mode = mode;
  for (std::size_t i : kept) {
    s.points.push_back(samples[i]);
    s.timestamps.push_back(timestamps[i]);
  }
  validate(s);
  return s;
}

void validate(const Stroke& stroke) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, "stroke '" + stroke.id + "': " + why);
  };
  if (stroke.points.size() < 2) fail("needs >= 2 points");
  if (stroke.points.size() != stroke.timestamps.size())
    fail("points and timestamps differ in length");
  if (stroke.mode == StrokeMode::kLine && stroke.points.size() != 2)
    fail("line strokes hold exactly 2 points");
  for (const auto& p : stroke.points)
    if (!is_finite(p)) fail("non-finite point");
  for (std::size_t i = 1; i < stroke.timestamps.size(); ++i)
    if (stroke.timestamps[i] < stroke.timestamps[i - 1]) fail("timestamps decrease");
}

void validate(const Sketch& sketch) {
  if (!(sketch.workspace.size > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "workspace size must be > 0");
  std::set<std::string> ids;
  for (const auto& s : sketch.strokes) {
    validate(s);
    if (!ids.insert(s.id).second)
      throw Error(ErrorCode::kInvalidArgument, "duplicate stroke id '" + s.id + "'");
  }
  for (const auto& s : sketch.strokes)
    if (s.mirror_of && !ids.contains(s.mirror_of->source_id))
      throw Error(ErrorCode::kInvalidArgument,
                  "stroke '" + s.id + "' mirrors unknown stroke '" +
                      s.mirror_of->source_id + "'");
}

}  // namespace holme
