#pragma once

#include "holme/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace holme {

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh, counter-clockwise winding seen from outside.
struct Mesh {
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;

  bool empty() const { return vertices.empty(); }
  bool operator==(const Mesh&) const = default;
};

enum class BrushMode { kRaise, kLower, kSmooth };

inline constexpr double kDefaultBrushRadius = 0.05;
inline constexpr double kDefaultBrushStrength = 0.5;

struct Brush {
  Point3 center = Point3::Zero();
  double radius = kDefaultBrushRadius;
  double strength = kDefaultBrushStrength;
  BrushMode mode = BrushMode::kRaise;
};

// Construction --------------------------------------------------------------

/// Capped tube around a polyline, ring frames carried by parallel transport.
/// Consecutive duplicate points (within 1e-9) are collapsed; throws
/// DegenerateSegment if fewer than two distinct points remain.
Mesh tube_mesh_from_stroke(std::span<const Point3> points, double radius,
                           int sides);

/// Quickhull. Throws DegenerateInput for coplanar or collinear input.
Mesh convex_hull(std::span<const Point3> points);

/// Axis-aligned box mesh, 8 vertices and 12 outward triangles.
Mesh box_mesh(const Point3& min, const Point3& max);

/// Appends `other`, offsetting its indices by the current vertex count.
void append(Mesh& mesh, const Mesh& other);

// Queries -------------------------------------------------------------------

AABB compute_aabb(const Mesh& mesh);

/// Sum of signed tetrahedron volumes against the origin.
double signed_volume(const Mesh& mesh);

/// True when every undirected edge is shared by exactly two triangles and
/// each directed edge appears once (consistent orientation).
bool is_watertight(const Mesh& mesh);

/// Area-weighted vertex normals (unit length, zero for isolated vertices).
std::vector<Vec3> vertex_normals(const Mesh& mesh);

/// Throws InvalidArgument when indices are out of range, a triangle repeats
/// an index, or a vertex is unreferenced.
void validate(const Mesh& mesh);

// Editing -------------------------------------------------------------------

/// Uniform scale + translation so the mesh's AABB is centered on
/// `sketch_bounds` and its largest extent matches the bounds' largest extent.
Mesh normalize_to_workspace(const Mesh& mesh, const AABB& sketch_bounds);

/// Brush edit; topology is never changed.
///
/// Support is every vertex within `radius` of `center`.
///
///  - RAISE / LOWER displace along the brush-area normal n: the normalized
///    vector area of all triangles touching a vertex within 2 * radius of the
///    center. Only supported vertices whose own normal faces n move, by
///    +/- strength * radius * (1 - smoothstep(rho / radius)), rho being the
///    distance to the line through `center` along n. When the area vector
///    vanishes (closed mesh inside the sampling ball) each vertex uses its
///    own normal and rho is the plain distance to the center.
///  - SMOOTH moves each supported vertex toward the centroid of its edge
///    neighbors by `strength`, reading neighbor positions from the input.
Mesh sculpt(const Mesh& mesh, const Brush& brush);

}  // namespace holme
