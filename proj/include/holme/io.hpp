#pragma once

#include "holme/mesh.hpp"
#include "holme/scene.hpp"
#include "holme/stroke.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace holme {

/// Canonical OBJ number: general format, at most 9 significant digits.
std::string format_obj_number(double value);

// OBJ ----------------------------------------------------------------------------

/// "v x y z" lines followed by "f i j k" lines (1-based), "\n" terminated.
std::string export_obj(const Mesh& mesh);

/// Accepts comments, blank lines and unknown directives (vn, vt, usemtl, ...).
/// Faces may use "v", "v/vt", "v//vn" or "v/vt/vn"; polygons are fanned;
/// negative indices are relative. Throws ParseError with the line number.
Mesh import_obj(std::string_view text);

// Sketch JSON --------------------------------------------------------------------

nlohmann::json sketch_to_json(const Sketch& sketch);
Sketch sketch_from_json(const nlohmann::json& doc);
std::string save_sketch(const Sketch& sketch);
/// Throws SchemaError located by JSON path, e.g. "strokes[0].points".
Sketch load_sketch(std::string_view text);

/// Tube per stroke, concatenated with offset face indices.
std::string sketch_to_obj(const Sketch& sketch, double radius, int sides);

// Scene JSON ---------------------------------------------------------------------

nlohmann::json mesh_to_json(const Mesh& mesh);
/// `path` prefixes SchemaError locations.
Mesh mesh_from_json(const nlohmann::json& doc, const std::string& path);

/// Resolves an object's library key to its stored mesh.
using MeshResolver = std::function<Mesh(const std::string& key)>;

struct SceneLoadResult {
  Scene scene;
  std::vector<std::string> warnings;
};

/// Objects carrying a library key reference the library instead of embedding
/// their mesh when `embed_library_meshes` is false.
std::string save_scene(const Scene& scene, bool embed_library_meshes = true);
SceneLoadResult load_scene(std::string_view text, const MeshResolver& resolver = {});

// Library store ------------------------------------------------------------------

/// On-disk object library: <root>/index.json plus <root>/meshes/<key>.obj.
class LibraryStore {
 public:
  struct Entry {
    std::string key;
    std::string mesh_file;  // relative to root
    MaterialDescriptor material;
    Vec3 scale = Vec3::Ones();
    Vec3 extents = Vec3::Zero();
    std::string label;
    std::string created_at;
  };

  /// Opens (or initializes) a library rooted at `root`. Throws SchemaError
  /// when index.json is malformed or references a missing mesh file.
  explicit LibraryStore(std::filesystem::path root);

  std::string store(const SceneObject& object, std::string created_at = {});
  SceneObject retrieve(const std::string& key) const;
  const std::vector<Entry>& entries() const { return entries_; }
  /// Keys whose label slug equals slugify(type), in insertion order.
  std::vector<std::string> keys_of_type(std::string_view type) const;
  MeshResolver resolver() const;

 private:
  void save_index() const;
  const Entry& find(const std::string& key) const;

  std::filesystem::path root_;
  std::vector<Entry> entries_;
  std::uint64_t counter_ = 0;
};

// Files --------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

}  // namespace holme
