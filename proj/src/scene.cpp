#include "holme/scene.hpp"

#include "holme/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace holme {

Point3 Transform::apply(const Point3& local) const {
  return position + rotation * scale.cwiseProduct(local);
}

std::string_view to_string(Weather weather) {
  switch (weather) {
    case Weather::kClear: return "clear";
    case Weather::kCloudy: return "cloudy";
    case Weather::kFoggy: return "foggy";
    case Weather::kRainy: return "rainy";
    case Weather::kSnowy: return "snowy";
  }
  return "clear";
}

Weather parse_weather(std::string_view name) {
  for (auto w : {Weather::kClear, Weather::kCloudy, Weather::kFoggy,
                 Weather::kRainy, Weather::kSnowy})
    if (to_string(w) == name) return w;
  throw Error(ErrorCode::kUnknownWeather, "'" + std::string(name) + "'");
}

void Environment::set_time_of_day(double hours) {
  double h = std::fmod(hours, 24.0);
  if (h < 0.0) h += 24.0;
  if (h >= 24.0) h = 0.0;
  time_of_day = h;
}

Point3 Corner::of(const AABB& box) const {
  return {max_x ? box.max.x() : box.min.x(), max_y ? box.max.y() : box.min.y(),
          max_z ? box.max.z() : box.min.z()};
}

AABB world_aabb(const SceneObject& object) {
  const AABB local = compute_aabb(object.mesh);
  AABB out = AABB::of_point(object.transform.apply(local.min));
  for (int i = 1; i < 8; ++i) {
    const Corner c{(i & 1) != 0, (i & 2) != 0, (i & 4) != 0};
    out.expand(object.transform.apply(c.of(local)));
  }
  return out;
}

Scene::Scene() {
  bounds_ = {Point3(-5.0, 0.0, -5.0), Point3(5.0, 3.0, 5.0)};
}

std::string Scene::fresh_id() {
  for (;;) {
    std::string id = "obj-" + std::to_string(next_id_++);
    if (!contains(id)) return id;
  }
}

std::string Scene::place(Mesh mesh, const Transform& transform,
                         MaterialDescriptor material, std::string label) {
  if (mesh.empty()) throw Error(ErrorCode::kEmptyMesh, "cannot place an empty mesh");
  SceneObject object;
  object.id = fresh_id();
  object.mesh = std::move(mesh);
  object.transform = transform;
  object.material = std::move(material);
  object.label = std::move(label);
  objects_.push_back(std::move(object));
  return objects_.back().id;
}

void Scene::insert(SceneObject object) {
  if (object.mesh.empty())
    throw Error(ErrorCode::kEmptyMesh, "object '" + object.id + "' has no mesh");
  if (contains(object.id))
    throw Error(ErrorCode::kInvalidArgument, "duplicate object id '" + object.id + "'");
  objects_.push_back(std::move(object));
}

std::string Scene::duplicate(const std::string& id) {
  SceneObject copy = get(id);
  copy.id = fresh_id();
  objects_.push_back(std::move(copy));
  return objects_.back().id;
}

void Scene::remove(const std::string& id) {
  const auto it = std::find_if(objects_.begin(), objects_.end(),
                               [&](const SceneObject& o) { return o.id == id; });
  if (it == objects_.end()) throw Error(ErrorCode::kUnknownId, "'" + id + "'");
  objects_.erase(it);
}

SceneObject& Scene::get(const std::string& id) {
  for (auto& o : objects_)
    if (o.id == id) return o;
  throw Error(ErrorCode::kUnknownId, "'" + id + "'");
}

const SceneObject& Scene::get(const std::string& id) const {
  return const_cast<Scene*>(this)->get(id);
}

bool Scene::contains(const std::string& id) const {
  return std::any_of(objects_.begin(), objects_.end(),
                     [&](const SceneObject& o) { return o.id == id; });
}

Transform translate(const SceneObject& object, const Vec3& delta) {
  Transform t = object.transform;
  t.position += delta;
  return t;
}

Transform scale_about_fixed_corner(const SceneObject& object, Corner dragged,
                                   double factor) {
  if (!(factor > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be > 0");
  const Transform& t = object.transform;
  const Point3 anchor = dragged.opposite().of(compute_aabb(object.mesh));
  Transform out = t;
  out.scale = factor * t.scale;
  // Keep position + R (scale .* anchor) fixed.
  out.position = t.position + t.rotation * (t.scale - out.scale).cwiseProduct(anchor);
  return out;
}

Transform scale_axis(const SceneObject& object, Axis axis, double factor,
                     bool from_max) {
  if (!(factor > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be > 0");
  const int a = static_cast<int>(axis);
  const AABB box = compute_aabb(object.mesh);
  Point3 anchor = box.center();
  anchor[a] = from_max ? box.min[a] : box.max[a];
  const Transform& t = object.transform;
  Transform out = t;
  out.scale[a] *= factor;
  out.position = t.position + t.rotation * (t.scale - out.scale).cwiseProduct(anchor);
  return out;
}

Transform rotate_about_axis(const SceneObject& object, Axis axis, double angle) {
  static const Vec3 kAxes[] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  Transform out = object.transform;
  out.rotation =
      (Eigen::Quaterniond(Eigen::AngleAxisd(angle, kAxes[static_cast<int>(axis)])) *
       out.rotation)
          .normalized();
  return out;
}

Transform settle(const Scene& scene, const std::string& id) {
  const SceneObject& object = scene.get(id);
  const AABB box = world_aabb(object);
  const double bottom = box.min.y();

  double support = 0.0;
  for (const auto& other : scene.objects()) {
    if (other.id == id) continue;
    const AABB ob = world_aabb(other);
    const double overlap_x = std::min(box.max.x(), ob.max.x()) - std::max(box.min.x(), ob.min.x());
    const double overlap_z = std::min(box.max.z(), ob.max.z()) - std::max(box.min.z(), ob.min.z());
    if (overlap_x <= 0.0 || overlap_z <= 0.0) continue;
    if (ob.max.y() <= bottom + 1e-9) support = std::max(support, ob.max.y());
  }

  Transform out = object.transform;
  out.position.y() += support - bottom;
  return out;
}

SunState sun_direction(double hours) {
  double h = std::fmod(hours, 24.0);
  if (h < 0.0) h += 24.0;
  const double phase = std::numbers::pi * (h - 6.0) / 12.0;
  const double elevation = 0.5 * std::numbers::pi * std::sin(phase);
  // Horizontal bearing of the sun: east (+x) at phase 0, south (+z) at pi/2.
  const Vec3 bearing(std::cos(phase), 0.0, std::sin(phase));
  const Vec3 to_sun =
      std::cos(elevation) * bearing + std::sin(elevation) * Vec3::UnitY();
  SunState s;
  s.direction = (-to_sun).normalized();
  s.elevation_deg = elevation * 180.0 / std::numbers::pi;
  double az = std::fmod(phase * 180.0 / std::numbers::pi, 360.0);
  if (az < 0.0) az += 360.0;
  s.azimuth_deg = az;
  s.below_horizon = elevation < 0.0;
  return s;
}

std::string slugify(std::string_view label) {
  std::string out;
  bool dash = false;
  for (unsigned char c : label) {
    if (std::isalnum(c)) {
      if (dash && !out.empty()) out += '-';
      out += static_cast<char>(std::tolower(c));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out.empty() ? "object" : out;
}

std::string Library::store(const SceneObject& object) {
  std::string key = slugify(object.label) + "-" + std::to_string(++counter_);
  SceneObject entry = object;
  entry.library_key = key;
  entries_[key] = std::move(entry);
  return key;
}

SceneObject Library::retrieve(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::kUnknownKey, "'" + key + "'");
  SceneObject out = it->second;
  out.transform.position = Point3::Zero();
  out.transform.rotation = Eigen::Quaterniond::Identity();
  return out;
}

std::vector<std::string> Library::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

}  // namespace holme
