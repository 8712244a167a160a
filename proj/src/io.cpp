#include "holme/io.hpp"

#include "holme/errors.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace holme {

using nlohmann::json;

std::string format_obj_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  if (ec != std::errc{}) throw Error(ErrorCode::kInvalidArgument, "unformattable number");
  return std::string(buf, end);
}

std::string export_obj(const Mesh& mesh) {
  std::string out;
  out.reserve(mesh.vertices.size() * 32 + mesh.triangles.size() * 20);
  for (const auto& v : mesh.vertices) {
    out += "v ";
    out += format_obj_number(v.x());
    out += ' ';
    out += format_obj_number(v.y());
    out += ' ';
    out += format_obj_number(v.z());
    out += '\n';
  }
  for (const auto& t : mesh.triangles) {
    out += "f " + std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' +
           std::to_string(t[2] + 1) + '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  if (!token.empty() && token.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
    throw ParseError(line, "bad number '" + std::string(token) + "'");
  return value;
}

}  // namespace

Mesh import_obj(std::string_view text) {
  Mesh mesh;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw ParseError(line_no, "vertex needs 3 coordinates");
      mesh.vertices.emplace_back(parse_double(tokens[1], line_no),
                                 parse_double(tokens[2], line_no),
                                 parse_double(tokens[3], line_no));
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) throw ParseError(line_no, "face needs >= 3 vertices");
      std::vector<std::uint32_t> refs;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        const std::string_view ref = tokens[k].substr(0, tokens[k].find('/'));
        long long idx = 0;
        const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), idx);
        if (ec != std::errc{} || ptr != ref.data() + ref.size())
          throw ParseError(line_no, "bad face index '" + std::string(tokens[k]) + "'");
        const auto count = static_cast<long long>(mesh.vertices.size());
        if (idx < 0) idx = count + idx + 1;
        if (idx < 1 || idx > count)
          throw ParseError(line_no, "face index " + std::string(ref) +
                                        " outside 1.." + std::to_string(count));
        refs.push_back(static_cast<std::uint32_t>(idx - 1));
      }
      for (std::size_t k = 1; k + 1 < refs.size(); ++k) {
        const Triangle t{refs[0], refs[k], refs[k + 1]};
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
          throw ParseError(line_no, "degenerate face repeats a vertex");
        mesh.triangles.push_back(t);
      }
    }
    // Other directives (vn, vt, usemtl, o, g, s, mtllib, ...) are ignored.
  }
  return mesh;
}

// JSON helpers -------------------------------------------------------------------

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& why) {
  throw SchemaError(path, why);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_fail(path.empty() ? "$" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_fail(path, "expected a finite number");
  return v;
}

std::string string_of(const json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

const json& array_of(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  return j;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) schema_fail(path, "expected [x, y, z]");
  return {number(j[0], index_path(path, 0)), number(j[1], index_path(path, 1)),
          number(j[2], index_path(path, 2))};
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

const char* plane_name(MirrorPlane p) {
  return p == MirrorPlane::kLeftRight ? "left_right" : "front_back";
}

json material_json(const MaterialDescriptor& m) {
  return {{"base_color", m.base_color}, {"tags", m.material_tags}};
}

MaterialDescriptor material_from(const json& j, const std::string& path) {
  MaterialDescriptor m;
  const json& color = field(j, path, "base_color");
  const std::string cpath = join(path, "base_color");
  if (!color.is_array() || color.size() != 3) schema_fail(cpath, "expected [r, g, b]");
  for (std::size_t i = 0; i < 3; ++i) {
    const double c = number(color[i], index_path(cpath, i));
    if (c < 0.0 || c > 1.0) schema_fail(index_path(cpath, i), "color outside [0, 1]");
    m.base_color[i] = c;
  }
  if (j.contains("tags")) {
    const json& tags = array_of(j.at("tags"), join(path, "tags"));
    for (std::size_t i = 0; i < tags.size(); ++i)
      m.material_tags.push_back(string_of(tags[i], index_path(join(path, "tags"), i)));
  }
  return m;
}

}  // namespace

// Sketch ---------------------------------------------------------------------------

json sketch_to_json(const Sketch& sketch) {
  json strokes = json::array();
  for (const auto& s : sketch.strokes) {
    json points = json::array();
    for (const auto& p : s.points) points.push_back(vec_json(p));
    json mirror = nullptr;
    if (s.mirror_of)
      mirror = {{"stroke", s.mirror_of->source_id}, {"plane", plane_name(s.mirror_of->plane)}};
    strokes.push_back({{"id", s.id},
                       {"mode", s.mode == StrokeMode::kLine ? "line" : "freehand"},
                       {"points", std::move(points)},
                       {"timestamps", s.timestamps},
                       {"mirror_of", std::move(mirror)}});
  }
  const Workspace& ws = sketch.workspace;
  return {{"workspace", {{"origin", vec_json(ws.origin)}, {"size", ws.size}, {"yaw", ws.yaw}}},
          {"strokes", std::move(strokes)}};
}

Sketch sketch_from_json(const json& doc) {
  Sketch sketch;
  const json& ws = field(doc, "", "workspace");
  sketch.workspace.origin = vec_from(field(ws, "workspace", "origin"), "workspace.origin");
  sketch.workspace.size = number(field(ws, "workspace", "size"), "workspace.size");
  sketch.workspace.yaw = number(field(ws, "workspace", "yaw"), "workspace.yaw");
  if (!(sketch.workspace.size > 0.0)) schema_fail("workspace.size", "must be > 0");

  const json& strokes = array_of(field(doc, "", "strokes"), "strokes");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    const std::string path = index_path("strokes", i);
    const json& js = strokes[i];
    Stroke s;
    s.id = string_of(field(js, path, "id"), join(path, "id"));
    if (!ids.insert(s.id).second) schema_fail(join(path, "id"), "duplicate stroke id");

    const std::string mode = string_of(field(js, path, "mode"), join(path, "mode"));
    if (mode == "freehand") s.mode = StrokeMode::kFreehand;
    else if (mode == "line") s.mode = StrokeMode::kLine;
    else schema_fail(join(path, "mode"), "expected \"freehand\" or \"line\"");

    const std::string ppath = join(path, "points");
    const json& pts = array_of(field(js, path, "points"), ppath);
    for (std::size_t k = 0; k < pts.size(); ++k)
      s.points.push_back(vec_from(pts[k], index_path(ppath, k)));
    if (s.points.size() < 2) schema_fail(ppath, "a stroke needs >= 2 points");
    if (s.mode == StrokeMode::kLine && s.points.size() != 2)
      schema_fail(ppath, "line strokes hold exactly 2 points");

    const std::string tpath = join(path, "timestamps");
    const json& ts = array_of(field(js, path, "timestamps"), tpath);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      s.timestamps.push_back(number(ts[k], index_path(tpath, k)));
      if (k > 0 && s.timestamps[k] < s.timestamps[k - 1])
        schema_fail(index_path(tpath, k), "timestamps must be non-decreasing");
    }
    if (s.timestamps.size() != s.points.size())
      schema_fail(tpath, "length differs from points");

    if (js.contains("mirror_of") && !js.at("mirror_of").is_null()) {
      const std::string mpath = join(path, "mirror_of");
      const json& m = js.at("mirror_of");
      MirrorRef ref;
      ref.source_id = string_of(field(m, mpath, "stroke"), join(mpath, "stroke"));
      const std::string plane = string_of(field(m, mpath, "plane"), join(mpath, "plane"));
      if (plane == "left_right") ref.plane = MirrorPlane::kLeftRight;
      else if (plane == "front_back") ref.plane = MirrorPlane::kFrontBack;
      else schema_fail(join(mpath, "plane"), "expected \"left_right\" or \"front_back\"");
      s.mirror_of = std::move(ref);
    }
    sketch.strokes.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < sketch.strokes.size(); ++i) {
    const auto& s = sketch.strokes[i];
    if (s.mirror_of && !ids.contains(s.mirror_of->source_id))
      schema_fail(index_path("strokes", i) + ".mirror_of.stroke", "unknown stroke id");
  }
  return sketch;
}

std::string save_sketch(const Sketch& sketch) { return dump(sketch_to_json(sketch)); }

Sketch load_sketch(std::string_view text) { return sketch_from_json(parse_document(text)); }

std::string sketch_to_obj(const Sketch& sketch, double radius, int sides) {
  if (sketch.strokes.empty()) throw Error(ErrorCode::kEmptySketch, "sketch has no strokes");
  Mesh all;
  for (const auto& s : sketch.strokes) append(all, tube_mesh_from_stroke(s.points, radius, sides));
  return export_obj(all);
}

// Scene ----------------------------------------------------------------------------

json mesh_to_json(const Mesh& mesh) {
  json verts = json::array();
  for (const auto& v : mesh.vertices) verts.push_back(vec_json(v));
  json tris = json::array();
  for (const auto& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
  return {{"vertices", std::move(verts)}, {"triangles", std::move(tris)}};
}

Mesh mesh_from_json(const json& doc, const std::string& path) {
  Mesh mesh;
  const std::string vpath = join(path, "vertices");
  const json& verts = array_of(field(doc, path, "vertices"), vpath);
  for (std::size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.push_back(vec_from(verts[i], index_path(vpath, i)));
  const std::string tpath = join(path, "triangles");
  const json& tris = array_of(field(doc, path, "triangles"), tpath);
  for (std::size_t i = 0; i < tris.size(); ++i) {
    const json& t = tris[i];
    if (!t.is_array() || t.size() != 3) schema_fail(index_path(tpath, i), "expected [i, j, k]");
    Triangle tri{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!t[k].is_number_unsigned() || t[k].get<std::uint64_t>() >= mesh.vertices.size())
        schema_fail(index_path(index_path(tpath, i), k), "index out of range");
      tri[k] = t[k].get<std::uint32_t>();
    }
    mesh.triangles.push_back(tri);
  }
  try {
    validate(mesh);
  } catch (const Error& e) {
    schema_fail(path, e.what());
  }
  return mesh;
}

std::string save_scene(const Scene& scene, bool embed_library_meshes) {
  json objects = json::array();
  for (const auto& o : scene.objects()) {
    const auto& q = o.transform.rotation;
    json jo = {{"id", o.id},
               {"label", o.label},
               {"library_key", o.library_key ? json(*o.library_key) : json(nullptr)},
               {"material", material_json(o.material)},
               {"position", vec_json(o.transform.position)},
               {"rotation", json::array({q.w(), q.x(), q.y(), q.z()})},
               {"scale", vec_json(o.transform.scale)}};
    if (!o.library_key || embed_library_meshes) jo["mesh"] = mesh_to_json(o.mesh);
    objects.push_back(std::move(jo));
  }
  json lights = json::array();
  for (const auto& l : scene.environment().lights)
    lights.push_back({{"position", vec_json(l.position)},
                      {"intensity", l.intensity},
                      {"range", l.range}});
  const json doc = {
      {"bounds", {{"min", vec_json(scene.bounds().min)}, {"max", vec_json(scene.bounds().max)}}},
      {"environment",
       {{"time_of_day", scene.environment().time_of_day},
        {"weather", to_string(scene.environment().weather)},
        {"lights", std::move(lights)}}},
      {"objects", std::move(objects)}};
  return dump(doc);
}

SceneLoadResult load_scene(std::string_view text, const MeshResolver& resolver) {
  const json doc = parse_document(text);
  SceneLoadResult result;
  Scene& scene = result.scene;

  const json& bounds = field(doc, "", "bounds");
  scene.bounds().min = vec_from(field(bounds, "bounds", "min"), "bounds.min");
  scene.bounds().max = vec_from(field(bounds, "bounds", "max"), "bounds.max");
  if ((scene.bounds().min.array() > scene.bounds().max.array()).any())
    schema_fail("bounds", "min exceeds max");

  const json& env = field(doc, "", "environment");
  const double hour = number(field(env, "environment", "time_of_day"), "environment.time_of_day");
  scene.environment().set_time_of_day(hour);
  const std::string weather = string_of(field(env, "environment", "weather"), "environment.weather");
  try {
    scene.environment().weather = parse_weather(weather);
  } catch (const Error&) {
    throw SchemaError("environment.weather", "unknown weather '" + weather + "'",
                      ErrorCode::kUnknownWeather);
  }
  const json& lights = array_of(field(env, "environment", "lights"), "environment.lights");
  for (std::size_t i = 0; i < lights.size(); ++i) {
    const std::string path = index_path("environment.lights", i);
    Light l;
    l.position = vec_from(field(lights[i], path, "position"), join(path, "position"));
    l.intensity = number(field(lights[i], path, "intensity"), join(path, "intensity"));
    l.range = number(field(lights[i], path, "range"), join(path, "range"));
    if (l.intensity < 0.0) schema_fail(join(path, "intensity"), "must be >= 0");
    if (!(l.range > 0.0)) schema_fail(join(path, "range"), "must be > 0");
    scene.environment().lights.push_back(l);
  }

  const json& objects = array_of(field(doc, "", "objects"), "objects");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = index_path("objects", i);
    const json& jo = objects[i];
    SceneObject o;
    o.id = string_of(field(jo, path, "id"), join(path, "id"));
    if (scene.contains(o.id)) schema_fail(join(path, "id"), "duplicate object id");
    o.label = string_of(field(jo, path, "label"), join(path, "label"));
    if (jo.contains("library_key") && !jo.at("library_key").is_null())
      o.library_key = string_of(jo.at("library_key"), join(path, "library_key"));
    o.material = material_from(field(jo, path, "material"), join(path, "material"));
    o.transform.position = vec_from(field(jo, path, "position"), join(path, "position"));
    o.transform.scale = vec_from(field(jo, path, "scale"), join(path, "scale"));
    if ((o.transform.scale.array() <= 0.0).any())
      schema_fail(join(path, "scale"), "components must be > 0");

    const std::string qpath = join(path, "rotation");
    const json& jq = field(jo, path, "rotation");
    if (!jq.is_array() || jq.size() != 4) schema_fail(qpath, "expected [w, x, y, z]");
    Eigen::Quaterniond q(number(jq[0], index_path(qpath, 0)), number(jq[1], index_path(qpath, 1)),
                         number(jq[2], index_path(qpath, 2)), number(jq[3], index_path(qpath, 3)));
    const double norm = q.norm();
    if (norm < 1e-12) schema_fail(qpath, "zero quaternion");
    if (std::abs(norm - 1.0) > 1e-3)
      result.warnings.push_back(qpath + ": quaternion norm " + std::to_string(norm) +
                                " renormalized");
    // Saved unit quaternions are left bit-exact.
    if (std::abs(norm - 1.0) > 1e-12) q.normalize();
    o.transform.rotation = q;

    if (jo.contains("mesh")) {
      o.mesh = mesh_from_json(jo.at("mesh"), join(path, "mesh"));
    } else if (o.library_key && resolver) {
      try {
        o.mesh = resolver(*o.library_key);
      } catch (const Error& e) {
        schema_fail(join(path, "library_key"), e.what());
      }
    } else {
      schema_fail(join(path, "mesh"), o.library_key ? "library key cannot be resolved"
                                                    : "missing field");
    }
    scene.insert(std::move(o));
  }
  return result;
}

// Library store --------------------------------------------------------------------

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

LibraryStore::LibraryStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_ / "meshes");
  const auto index = root_ / "index.json";
  if (!std::filesystem::exists(index)) {
    save_index();
    return;
  }
  const json doc = parse_document(read_file(index));
  const json& counter = field(doc, "", "counter");
  if (!counter.is_number_unsigned()) schema_fail("counter", "expected an unsigned integer");
  counter_ = counter.get<std::uint64_t>();
  const json& entries = array_of(field(doc, "", "entries"), "entries");
  std::set<std::string> keys;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = index_path("entries", i);
    const json& je = entries[i];
    Entry e;
    e.key = string_of(field(je, path, "key"), join(path, "key"));
    if (!keys.insert(e.key).second) schema_fail(join(path, "key"), "duplicate key");
    e.mesh_file = string_of(field(je, path, "mesh"), join(path, "mesh"));
    if (!std::filesystem::exists(root_ / e.mesh_file))
      schema_fail(join(path, "mesh"), "file '" + e.mesh_file + "' does not exist");
    e.material = material_from(field(je, path, "material"), join(path, "material"));
    e.scale = vec_from(field(je, path, "scale"), join(path, "scale"));
    e.extents = vec_from(field(je, path, "extents"), join(path, "extents"));
    e.label = string_of(field(je, path, "label"), join(path, "label"));
    e.created_at = string_of(field(je, path, "created_at"), join(path, "created_at"));
    entries_.push_back(std::move(e));
  }
}

void LibraryStore::save_index() const {
  json entries = json::array();
  for (const auto& e : entries_)
    entries.push_back({{"key", e.key},
                       {"mesh", e.mesh_file},
                       {"material", material_json(e.material)},
                       {"scale", vec_json(e.scale)},
                       {"extents", vec_json(e.extents)},
                       {"label", e.label},
                       {"created_at", e.created_at}});
  write_file(root_ / "index.json", dump({{"counter", counter_}, {"entries", std::move(entries)}}));
}

std::string LibraryStore::store(const SceneObject& object, std::string created_at) {
  if (object.mesh.empty()) throw Error(ErrorCode::kEmptyMesh, "cannot store an empty mesh");
  Entry e;
  e.key = slugify(object.label) + "-" + std::to_string(++counter_);
  e.mesh_file = "meshes/" + e.key + ".obj";
  e.material = object.material;
  e.scale = object.transform.scale;
  e.extents = compute_aabb(object.mesh).extents().cwiseProduct(object.transform.scale);
  e.label = object.label;
  e.created_at = created_at.empty() ? utc_now() : std::move(created_at);
  write_file(root_ / e.mesh_file, export_obj(object.mesh));
  entries_.push_back(e);
  save_index();
  return e.key;
}

const LibraryStore::Entry& LibraryStore::find(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.key == key) return e;
  throw Error(ErrorCode::kUnknownKey, "'" + key + "'");
}

SceneObject LibraryStore::retrieve(const std::string& key) const {
  const Entry& e = find(key);
  SceneObject o;
  o.library_key = e.key;
  o.mesh = import_obj(read_file(root_ / e.mesh_file));
  o.transform.scale = e.scale;
  o.material = e.material;
  o.label = e.label;
  return o;
}

std::vector<std::string> LibraryStore::keys_of_type(std::string_view type) const {
  const std::string slug = slugify(type);
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (slugify(e.label) == slug) out.push_back(e.key);
  return out;
}

MeshResolver LibraryStore::resolver() const {
  return [this](const std::string& key) { return retrieve(key).mesh; };
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

}  // namespace holme
