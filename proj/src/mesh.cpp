#include "holme/mesh.hpp"

#include "holme/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>

namespace holme {

namespace {

Vec3 any_perpendicular(const Vec3& t) {
  const Vec3 a = t.cwiseAbs();
  Vec3 axis = Vec3::UnitX();
  if (a.y() <= a.x() && a.y() <= a.z()) axis = Vec3::UnitY();
  else if (a.z() <= a.x() && a.z() <= a.y()) axis = Vec3::UnitZ();
  return (axis - axis.dot(t) * t).normalized();
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

Vec3 face_area_vector(const Mesh& mesh, const Triangle& t) {
  const Point3& a = mesh.vertices[t[0]];
  return (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a);
}

}  // namespace

Mesh tube_mesh_from_stroke(std::span<const Point3> input, double radius,
                           int sides) {
  if (!(radius > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "tube radius must be > 0");
  if (sides < 3) throw Error(ErrorCode::kInvalidArgument, "tube needs >= 3 sides");

  std::vector<Point3> points;
  for (const auto& p : input)
    if (points.empty() || (p - points.back()).norm() > 1e-9) points.push_back(p);
  if (points.size() < 2)
    throw Error(ErrorCode::kDegenerateSegment,
                "fewer than two distinct points after collapsing duplicates");

  const std::size_t n = points.size();
  const auto m = static_cast<std::size_t>(sides);

  std::vector<Vec3> dir(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    dir[i] = (points[i + 1] - points[i]).normalized();

  std::vector<Vec3> tangent(n);
  tangent[0] = dir[0];
  tangent[n - 1] = dir[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec3 sum = dir[i - 1] + dir[i];
    tangent[i] = sum.norm() > 1e-9 ? sum.normalized() : dir[i];
  }

  std::vector<Vec3> normal(n);
  normal[0] = any_perpendicular(tangent[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const Eigen::Quaterniond step =
        Eigen::Quaterniond::FromTwoVectors(tangent[i - 1], tangent[i]);
    Vec3 u = step * normal[i - 1];
    u -= u.dot(tangent[i]) * tangent[i];
    normal[i] = u.norm() > 1e-12 ? u.normalized() : any_perpendicular(tangent[i]);
  }

  Mesh mesh;
  mesh.vertices.reserve(n * m + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 u = normal[i];
    const Vec3 v = tangent[i].cross(u);
    for (std::size_t k = 0; k < m; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(m);
      mesh.vertices.push_back(points[i] +
                              radius * (std::cos(theta) * u + std::sin(theta) * v));
    }
  }
  const auto start_apex = static_cast<std::uint32_t>(n * m);
  const auto end_apex = start_apex + 1;
  mesh.vertices.push_back(points.front());
  mesh.vertices.push_back(points.back());

  auto ring = [m](std::size_t i, std::size_t k) {
    return static_cast<std::uint32_t>(i * m + k % m);
  };
  mesh.triangles.reserve(2 * m * (n - 1) + 2 * m);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto a = ring(i, k), b = ring(i, k + 1);
      const auto c = ring(i + 1, k + 1), d = ring(i + 1, k);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    mesh.triangles.push_back({start_apex, ring(0, k + 1), ring(0, k)});
    mesh.triangles.push_back({end_apex, ring(n - 1, k), ring(n - 1, k + 1)});
  }
  return mesh;
}

Mesh box_mesh(const Point3& lo, const Point3& hi) {
  Mesh mesh;
  for (int i = 0; i < 8; ++i)
    mesh.vertices.emplace_back((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(),
                               (i & 4) ? hi.z() : lo.z());
  mesh.triangles = {
      {0, 4, 6}, {0, 6, 2},  // -x
      {1, 3, 7}, {1, 7, 5},  // +x
      {0, 1, 5}, {0, 5, 4},  // -y
      {2, 6, 7}, {2, 7, 3},  // +y
      {0, 2, 3}, {0, 3, 1},  // -z
      {4, 5, 7}, {4, 7, 6},  // +z
  };
  return mesh;
}

void append(Mesh& mesh, const Mesh& other) {
  const auto offset = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.insert(mesh.vertices.end(), other.vertices.begin(),
                       other.vertices.end());
  for (const auto& t : other.triangles)
    mesh.triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
}

AABB compute_aabb(const Mesh& mesh) {
  if (mesh.vertices.empty()) throw Error(ErrorCode::kEmptyMesh, "mesh has no vertices");
  return bounds_of(mesh.vertices);
}

double signed_volume(const Mesh& mesh) {
  double six_v = 0.0;
  for (const auto& t : mesh.triangles)
    six_v += mesh.vertices[t[0]].dot(
        mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  return six_v / 6.0;
}

bool is_watertight(const Mesh& mesh) {
  if (mesh.triangles.empty()) return false;
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e)
      if (++directed[{t[e], t[(e + 1) % 3]}] > 1) return false;
  for (const auto& [edge, count] : directed)
    if (!directed.contains({edge.second, edge.first})) return false;
  return true;
}

std::vector<Vec3> vertex_normals(const Mesh& mesh) {
  std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
  for (const auto& t : mesh.triangles) {
    const Vec3 area = face_area_vector(mesh, t);
    for (auto i : t) normals[i] += area;
  }
  for (auto& n : normals)
    if (n.norm() > 0.0) n.normalize();
  return normals;
}

void validate(const Mesh& mesh) {
  std::vector<bool> used(mesh.vertices.size(), false);
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const auto& t = mesh.triangles[f];
    for (auto i : t) {
      if (i >= mesh.vertices.size())
        throw Error(ErrorCode::kInvalidArgument,
                    "triangle " + std::to_string(f) + " index out of range");
      used[i] = true;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorCode::kInvalidArgument,
                  "triangle " + std::to_string(f) + " repeats a vertex");
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i])
      throw Error(ErrorCode::kInvalidArgument,
                  "vertex " + std::to_string(i) + " is unreferenced");
  for (const auto& v : mesh.vertices)
    if (!is_finite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite vertex");
}

Mesh normalize_to_workspace(const Mesh& mesh, const AABB& sketch_bounds) {
  if (sketch_bounds.max_extent() < 1e-9)
    throw Error(ErrorCode::kDegenerateBounds, "sketch bounds have no extent");
  const AABB box = compute_aabb(mesh);
  if (box.max_extent() < 1e-12)
    throw Error(ErrorCode::kDegenerateBounds, "mesh collapses to a point");

  const double scale = sketch_bounds.max_extent() / box.max_extent();
  const Point3 from = box.center();
  const Point3 to = sketch_bounds.center();
  Mesh out = mesh;
  for (auto& v : out.vertices) v = to + scale * (v - from);
  return out;
}

Mesh sculpt(const Mesh& mesh, const Brush& brush) {
  if (mesh.empty()) throw Error(ErrorCode::kEmptyMesh, "cannot sculpt an empty mesh");
  if (!(brush.radius > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "brush radius must be > 0");
  if (!(brush.strength > 0.0 && brush.strength <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "brush strength must be in (0, 1]");

  const double r = brush.radius;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    if ((mesh.vertices[i] - brush.center).norm() <= r) support.push_back(i);

  Mesh out = mesh;
  if (support.empty()) return out;

  if (brush.mode == BrushMode::kSmooth) {
    std::vector<std::set<std::uint32_t>> neighbors(mesh.vertices.size());
    for (const auto& t : mesh.triangles)
      for (int e = 0; e < 3; ++e) {
        neighbors[t[e]].insert(t[(e + 1) % 3]);
        neighbors[t[(e + 1) % 3]].insert(t[e]);
      }
    for (auto i : support) {
      if (neighbors[i].empty()) continue;
      Point3 centroid = Point3::Zero();
      for (auto j : neighbors[i]) centroid += mesh.vertices[j];
      centroid /= static_cast<double>(neighbors[i].size());
      out.vertices[i] = brush.strength == 1.0
                            ? centroid
                            : Point3(mesh.vertices[i] +
                                     brush.strength * (centroid - mesh.vertices[i]));
    }
    return out;
  }

  Vec3 area = Vec3::Zero();
  for (const auto& t : mesh.triangles) {
    const bool near = std::any_of(t.begin(), t.end(), [&](std::uint32_t i) {
      return (mesh.vertices[i] - brush.center).norm() <= 2.0 * r;
    });
    if (near) area += face_area_vector(mesh, t);
  }
  const bool use_area_normal = area.norm() > 1e-12 * r * r;
  const Vec3 axis = use_area_normal ? area.normalized() : Vec3::Zero();
  const std::vector<Vec3> normals = vertex_normals(mesh);
  const double sign = brush.mode == BrushMode::kRaise ? 1.0 : -1.0;

  for (auto i : support) {
    const Vec3 offset = mesh.vertices[i] - brush.center;
    Vec3 direction;
    double rho;
    if (use_area_normal) {
      if (normals[i].dot(axis) <= 0.0) continue;
      direction = axis;
      rho = (offset - offset.dot(axis) * axis).norm();
    } else {
      direction = normals[i];
      rho = offset.norm();
    }
    const double falloff = 1.0 - smoothstep(rho / r);
    out.vertices[i] += sign * brush.strength * r * falloff * direction;
  }
  return out;
}

}  // namespace holme
