// Quickhull in 3D: seed tetrahedron from extreme points, per-face conflict
// lists, horizon extraction by flood fill over visible faces.

#include "holme/errors.hpp"
#include "holme/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace holme {

namespace {

struct Face {
  std::array<std::uint32_t, 3> v;
  Vec3 normal;
  double offset = 0.0;
  std::vector<std::uint32_t> outside;
  bool alive = true;
  bool visible = false;
};

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class Quickhull {
 public:
  explicit Quickhull(std::span<const Point3> points) : pts_(points) {
    double scale = 1.0;
    for (const auto& p : pts_) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    plane_eps_ = 1e-10 * scale;
    degenerate_eps_ = 1e-9 * scale;
  }

  Mesh run() {
    seed();
    for (;;) {
      const auto it = std::find_if(faces_.begin(), faces_.end(), [](const Face& f) {
        return f.alive && !f.outside.empty();
      });
      if (it == faces_.end()) break;
      add_point(static_cast<std::size_t>(it - faces_.begin()));
    }
    return extract();
  }

 private:
  double distance(const Face& f, std::uint32_t p) const {
    return f.normal.dot(pts_[p]) - f.offset;
  }

  std::size_t make_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Face f;
    f.v = {a, b, c};
    f.normal = (pts_[b] - pts_[a]).cross(pts_[c] - pts_[a]).normalized();
    f.offset = f.normal.dot(pts_[a]);
    faces_.push_back(std::move(f));
    const std::size_t id = faces_.size() - 1;
    edges_[edge_key(a, b)] = id;
    edges_[edge_key(b, c)] = id;
    edges_[edge_key(c, a)] = id;
    return id;
  }

  void assign(std::span<const std::uint32_t> candidates,
              std::span<const std::size_t> targets) {
    for (auto p : candidates) {
      double best = plane_eps_;
      std::size_t best_face = faces_.size();
      for (auto f : targets) {
        const double d = distance(faces_[f], p);
        if (d > best) {
          best = d;
          best_face = f;
        }
      }
      if (best_face != faces_.size()) faces_[best_face].outside.push_back(p);
    }
  }

  void seed() {
    const auto n = static_cast<std::uint32_t>(pts_.size());
    if (n < 4) throw Error(ErrorCode::kDegenerateInput, "hull needs >= 4 points");

    std::array<std::uint32_t, 6> extreme{};
    for (std::uint32_t i = 0; i < n; ++i)
      for (int a = 0; a < 3; ++a) {
        if (pts_[i][a] < pts_[extreme[2 * a]][a]) extreme[2 * a] = i;
        if (pts_[i][a] > pts_[extreme[2 * a + 1]][a]) extreme[2 * a + 1] = i;
      }
    std::uint32_t i0 = 0, i1 = 0;
    double best = -1.0;
    for (auto a : extreme)
      for (auto b : extreme) {
        const double d = (pts_[a] - pts_[b]).norm();
        if (d > best) {
          best = d;
          i0 = a;
          i1 = b;
        }
      }
    if (best < degenerate_eps_)
      throw Error(ErrorCode::kDegenerateInput, "all points coincide");

    std::uint32_t i2 = 0;
    best = -1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const Vec3 axis = (pts_[i1] - pts_[i0]).normalized();
      const Vec3 off = pts_[i] - pts_[i0];
      const double d = (off - off.dot(axis) * axis).norm();
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (best < degenerate_eps_)
      throw Error(ErrorCode::kDegenerateInput, "points are collinear");

    const Vec3 normal = (pts_[i1] - pts_[i0]).cross(pts_[i2] - pts_[i0]).normalized();
    std::uint32_t i3 = 0;
    best = -1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double d = std::abs(normal.dot(pts_[i] - pts_[i0]));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (best < degenerate_eps_)
      throw Error(ErrorCode::kDegenerateInput, "points are coplanar");

    if (normal.dot(pts_[i3] - pts_[i0]) > 0.0) std::swap(i1, i2);
    const std::array<std::size_t, 4> seeds{
        make_face(i0, i1, i2), make_face(i0, i3, i1), make_face(i1, i3, i2),
        make_face(i2, i3, i0)};

    std::vector<std::uint32_t> rest;
    for (std::uint32_t i = 0; i < n; ++i)
      if (i != i0 && i != i1 && i != i2 && i != i3) rest.push_back(i);
    assign(rest, seeds);
  }

  void add_point(std::size_t start) {
    Face& origin = faces_[start];
    const auto eye_it = std::max_element(
        origin.outside.begin(), origin.outside.end(),
        [&](auto a, auto b) { return distance(origin, a) < distance(origin, b); });
    const std::uint32_t eye = *eye_it;

    std::vector<std::size_t> visible{start};
    faces_[start].visible = true;
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const Face& f = faces_[visible[k]];
      for (int e = 0; e < 3; ++e) {
        const std::size_t nb = edges_.at(edge_key(f.v[(e + 1) % 3], f.v[e]));
        Face& g = faces_[nb];
        if (!g.visible && distance(g, eye) > plane_eps_) {
          g.visible = true;
          visible.push_back(nb);
        }
      }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> horizon;
    std::vector<std::uint32_t> orphans;
    for (auto id : visible) {
      const Face& f = faces_[id];
      for (int e = 0; e < 3; ++e) {
        const auto a = f.v[e], b = f.v[(e + 1) % 3];
        if (!faces_[edges_.at(edge_key(b, a))].visible) horizon.emplace_back(a, b);
      }
      for (auto p : f.outside)
        if (p != eye) orphans.push_back(p);
    }
    for (auto id : visible) {
      Face& f = faces_[id];
      f.alive = false;
      f.outside.clear();
      for (int e = 0; e < 3; ++e) edges_.erase(edge_key(f.v[e], f.v[(e + 1) % 3]));
    }

    std::vector<std::size_t> created;
    created.reserve(horizon.size());
    for (const auto& [a, b] : horizon) created.push_back(make_face(a, b, eye));
    assign(orphans, created);
  }

  Mesh extract() const {
    Mesh mesh;
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    auto index = [&](std::uint32_t v) {
      auto [it, inserted] =
          remap.try_emplace(v, static_cast<std::uint32_t>(mesh.vertices.size()));
      if (inserted) mesh.vertices.push_back(pts_[v]);
      return it->second;
    };
    for (const auto& f : faces_)
      if (f.alive) mesh.triangles.push_back({index(f.v[0]), index(f.v[1]), index(f.v[2])});
    return mesh;
  }

  std::span<const Point3> pts_;
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, std::size_t> edges_;
  double plane_eps_;
  double degenerate_eps_;
};

}  // namespace

Mesh convex_hull(std::span<const Point3> points) {
  for (const auto& p : points)
    if (!is_finite(p)) throw Error(ErrorCode::kInvalidArgument, "non-finite point");
  return Quickhull(points).run();
}

}  // namespace holme
