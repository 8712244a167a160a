#pragma once

#include "holme/geometry.hpp"
#include "holme/mesh.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holme {

struct Transform {
  Point3 position = Point3::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Vec3 scale = Vec3::Ones();

  /// world = position + R * (scale .* local)
  Point3 apply(const Point3& local) const;

  bool operator==(const Transform& o) const {
    return position == o.position && rotation.coeffs() == o.rotation.coeffs() &&
           scale == o.scale;
  }
};

struct MaterialDescriptor {
  std::array<double, 3> base_color{0.8, 0.8, 0.8};
  std::vector<std::string> material_tags;

  bool operator==(const MaterialDescriptor&) const = default;
};

enum class Weather { kClear, kCloudy, kFoggy, kRainy, kSnowy };

std::string_view to_string(Weather weather);
/// Throws UnknownWeather for anything outside the five lowercase names.
Weather parse_weather(std::string_view name);

struct Light {
  Point3 position = Point3::Zero();
  double intensity = 1.0;
  double range = 10.0;

  bool operator==(const Light&) const = default;
};

struct Environment {
  double time_of_day = 12.0;  // hours, wrapped into [0, 24)
  Weather weather = Weather::kClear;
  std::vector<Light> lights;

  void set_time_of_day(double hours);
  bool operator==(const Environment&) const = default;
};

struct SceneObject {
  std::string id;
  std::optional<std::string> library_key;
  Mesh mesh;  // local frame
  Transform transform;
  MaterialDescriptor material;
  std::string label;

  bool operator==(const SceneObject&) const = default;
};

/// Re-boxed world extent of the object's local mesh AABB (8 corners).
AABB world_aabb(const SceneObject& object);

/// Selects one corner of the local mesh AABB: bit set = max side on that axis.
struct Corner {
  bool max_x = false;
  bool max_y = false;
  bool max_z = false;

  Corner opposite() const { return {!max_x, !max_y, !max_z}; }
  Point3 of(const AABB& box) const;
};

enum class Axis { kX, kY, kZ };

/// Owns the objects, environment and room extents of one scene. Mutations
/// are single-writer; copy the Scene to hand a snapshot to another thread.
class Scene {
 public:
  Scene();

  std::vector<SceneObject>& objects() { return objects_; }
  const std::vector<SceneObject>& objects() const { return objects_; }
  Environment& environment() { return environment_; }
  const Environment& environment() const { return environment_; }
  AABB& bounds() { return bounds_; }
  const AABB& bounds() const { return bounds_; }

  std::string place(Mesh mesh, const Transform& transform,
                    MaterialDescriptor material, std::string label);
  /// Inserts a fully formed object (loaders); throws on duplicate id.
  void insert(SceneObject object);
  std::string duplicate(const std::string& id);
  void remove(const std::string& id);

  SceneObject& get(const std::string& id);
  const SceneObject& get(const std::string& id) const;
  bool contains(const std::string& id) const;

  bool operator==(const Scene& o) const {
    return objects_ == o.objects_ && environment_ == o.environment_ &&
           bounds_.min == o.bounds_.min && bounds_.max == o.bounds_.max;
  }

 private:
  std::string fresh_id();

  std::vector<SceneObject> objects_;
  Environment environment_;
  AABB bounds_;
  std::uint64_t next_id_ = 1;
};

// Manipulation ---------------------------------------------------------------

Transform translate(const SceneObject& object, const Vec3& delta);

/// Uniform scale by `factor` while the corner opposite `dragged` keeps its
/// world position.
Transform scale_about_fixed_corner(const SceneObject& object, Corner dragged,
                                   double factor);

/// Single-axis scale with the opposite face held fixed (min face when
/// `from_max` is true).
Transform scale_axis(const SceneObject& object, Axis axis, double factor,
                     bool from_max = true);

/// Left-multiplies the rotation by a world-axis rotation, then renormalizes.
Transform rotate_about_axis(const SceneObject& object, Axis axis, double angle);

/// Drops the object straight down onto the highest world-AABB top below it
/// among objects whose xz footprints overlap with positive area, or onto
/// the floor y = 0. An object below the floor is lifted to it.
Transform settle(const Scene& scene, const std::string& id);

// Environment ----------------------------------------------------------------

struct SunState {
  Vec3 direction;          // unit vector the light travels along
  double elevation_deg;    // negative below the horizon
  double azimuth_deg;      // 0 = east, 90 = south, 180 = west
  bool below_horizon;
};

/// Toy solar cycle: elevation 90 * sin(pi (h - 6) / 12) degrees, azimuth
/// sweeping east (6h) through south (12h) to west (18h).
SunState sun_direction(double hours);

// Library --------------------------------------------------------------------

/// Lowercase ASCII letters/digits, other runs collapsed to '-'.
std::string slugify(std::string_view label);

/// In-memory object library keyed by slug(label) + "-" + counter.
class Library {
 public:
  std::string store(const SceneObject& object);
  /// Mesh, scale, material and label as stored; position and rotation reset.
  SceneObject retrieve(const std::string& key) const;
  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::vector<std::string> keys() const;

 private:
  std::map<std::string, SceneObject> entries_;
  std::uint64_t counter_ = 0;
};

}  // namespace holme
