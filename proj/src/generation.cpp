#include "holme/generation.hpp"

#include "holme/errors.hpp"
#include "holme/io.hpp"

#include <charconv>
#include <cmath>

namespace holme {

using nlohmann::json;

std::string_view to_string(GeneratorKind kind) {
  return kind == GeneratorKind::kHull ? "hull" : "tubes";
}

std::optional<GeneratorKind> parse_generator(std::string_view name) {
  if (name == "tubes") return GeneratorKind::kTubes;
  if (name == "hull") return GeneratorKind::kHull;
  return std::nullopt;
}

SketchEncoding encode_sketch(const Sketch& sketch) {
  if (sketch.strokes.empty()) throw Error(ErrorCode::kEmptySketch, "sketch has no strokes");
  const double t0 = sketch.strokes.front().timestamps.empty()
                        ? 0.0
                        : sketch.strokes.front().timestamps.front();
  SketchEncoding enc;
  for (const auto& s : sketch.strokes) {
    EncodedStroke es;
    for (const auto& p : s.points) es.points.push_back(sketch.workspace.to_local(p));
    for (double t : s.timestamps) es.timestamps.push_back(t - t0);
    enc.strokes.push_back(std::move(es));
  }
  return enc;
}

AABB encoding_bounds(const SketchEncoding& encoding) {
  std::optional<AABB> box;
  for (const auto& s : encoding.strokes)
    for (const auto& p : s.points) {
      if (box) box->expand(p);
      else box = AABB::of_point(p);
    }
  if (!box) throw Error(ErrorCode::kEmptySketch, "encoding has no points");
  return *box;
}

Mesh TubeGenerator::build(const SketchEncoding& encoding) const {
  const double radius = kTubeRadiusFraction * encoding_bounds(encoding).max_extent();
  Mesh out;
  for (const auto& s : encoding.strokes) {
    try {
      append(out, tube_mesh_from_stroke(s.points, radius, kTubeSides));
    } catch (const Error& e) {
      // A stroke that collapses to a point contributes nothing.
      if (e.code() != ErrorCode::kDegenerateSegment) throw;
    }
  }
  if (out.empty()) throw Error(ErrorCode::kDegenerateSegment, "every stroke collapses to a point");
  return out;
}

Mesh HullGenerator::build(const SketchEncoding& encoding) const {
  std::vector<Point3> all;
  for (const auto& s : encoding.strokes) all.insert(all.end(), s.points.begin(), s.points.end());
  return convex_hull(all);
}

const Generator& generator_for(GeneratorKind kind) {
  static const TubeGenerator tubes;
  static const HullGenerator hull;
  if (kind == GeneratorKind::kHull) return hull;
  return tubes;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform in [-1, 1), identical on every platform.
double signed_unit(std::uint64_t& state) {
  return 2.0 * static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 1.0;
}

}  // namespace

void apply_jitter(Mesh& mesh, std::uint64_t seed, int variant, double max_displacement) {
  std::uint64_t state = seed;
  std::uint64_t mix = static_cast<std::uint64_t>(variant);
  state ^= splitmix64(mix);
  const double per_axis = max_displacement / std::sqrt(3.0);
  for (auto& v : mesh.vertices) {
    const double dx = signed_unit(state);
    const double dy = signed_unit(state);
    const double dz = signed_unit(state);
    v += per_axis * Vec3(dx, dy, dz);
  }
}

GenerateResponse generate(const GenerateRequest& request) {
  if (request.variants < 1 || request.variants > kMaxVariants)
    throw Error(ErrorCode::kInvalidArgument,
                "variants must be in [1, " + std::to_string(kMaxVariants) + "]");
  if (request.encoding.strokes.empty())
    throw Error(ErrorCode::kEmptySketch, "request has no strokes");

  const AABB bounds = encoding_bounds(request.encoding);
  const double extent = bounds.max_extent();
  if (extent < 1e-9)
    throw Error(ErrorCode::kGenerationFailed, "sketch has no spatial extent");

  Mesh base;
  try {
    base = generator_for(request.generator).build(request.encoding);
  } catch (const Error& e) {
    throw Error(ErrorCode::kGenerationFailed, e.what());
  }

  GenerateResponse response;
  response.request_id = request.request_id;
  for (int k = 0; k < request.variants; ++k) {
    Mesh m = base;
    if (k > 0) apply_jitter(m, request.seed, k, kJitterFraction * extent);
    try {
      response.meshes.push_back(normalize_to_workspace(m, bounds));
    } catch (const Error& e) {
      throw Error(ErrorCode::kGenerationFailed, e.what());
    }
  }
  return response;
}

// Payloads ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw SchemaError(path, why);
}

double finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "expected a finite number");
  return v;
}

std::uint64_t parse_seed(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  if (j.is_string()) {
    // Decimal strings carry seeds above 2^53 from JavaScript clients.
    const auto& s = j.get_ref<const std::string&>();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return v;
  }
  bad("payload.seed", "expected an unsigned 64-bit integer");
}

}  // namespace

GenerateRequest request_from_payload(const json& payload, const std::string& request_id,
                                     GeneratorKind fallback) {
  if (!payload.is_object()) bad("payload", "expected an object");
  GenerateRequest req;
  req.request_id = request_id;
  req.generator = fallback;

  if (const auto it = payload.find("generator"); it != payload.end() && !it->is_null()) {
    if (!it->is_string()) bad("payload.generator", "expected a string");
    const auto kind = parse_generator(it->get<std::string>());
    if (!kind) bad("payload.generator", "expected \"tubes\" or \"hull\"");
    req.generator = *kind;
  }

  const auto vit = payload.find("variants");
  if (vit == payload.end()) {
    req.variants = 1;
  } else {
    if (!vit->is_number_integer()) bad("payload.variants", "expected an integer");
    const auto v = vit->get<std::int64_t>();
    if (v < 1 || v > kMaxVariants)
      bad("payload.variants", "must be in [1, " + std::to_string(kMaxVariants) + "]");
    req.variants = static_cast<int>(v);
  }

  if (const auto it = payload.find("seed"); it != payload.end()) req.seed = parse_seed(*it);

  const auto sit = payload.find("strokes");
  if (sit == payload.end()) bad("payload.strokes", "missing field");
  if (!sit->is_array() || sit->empty()) bad("payload.strokes", "expected a non-empty array");
  for (std::size_t i = 0; i < sit->size(); ++i) {
    const std::string path = "payload.strokes[" + std::to_string(i) + "]";
    const json& js = (*sit)[i];
    if (!js.is_object()) bad(path, "expected an object");
    const auto pit = js.find("points");
    if (pit == js.end() || !pit->is_array()) bad(path + ".points", "expected an array");
    EncodedStroke es;
    for (std::size_t k = 0; k < pit->size(); ++k) {
      const std::string pp = path + ".points[" + std::to_string(k) + "]";
      const json& jp = (*pit)[k];
      if (!jp.is_array() || jp.size() != 3) bad(pp, "expected [x, y, z]");
      es.points.emplace_back(finite_number(jp[0], pp + "[0]"), finite_number(jp[1], pp + "[1]"),
                             finite_number(jp[2], pp + "[2]"));
    }
    if (es.points.size() < 2) bad(path + ".points", "a stroke needs >= 2 points");
    const auto tit = js.find("timestamps");
    if (tit != js.end()) {
      if (!tit->is_array()) bad(path + ".timestamps", "expected an array");
      for (std::size_t k = 0; k < tit->size(); ++k)
        es.timestamps.push_back(
            finite_number((*tit)[k], path + ".timestamps[" + std::to_string(k) + "]"));
      if (es.timestamps.size() != es.points.size())
        bad(path + ".timestamps", "length differs from points");
    }
    req.encoding.strokes.push_back(std::move(es));
  }
  return req;
}

json request_to_payload(const GenerateRequest& request) {
  json strokes = json::array();
  for (const auto& s : request.encoding.strokes) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({p.x(), p.y(), p.z()});
    strokes.push_back({{"points", std::move(pts)}, {"timestamps", s.timestamps}});
  }
  return {{"strokes", std::move(strokes)},
          {"generator", to_string(request.generator)},
          {"variants", request.variants},
          {"seed", request.seed}};
}

json response_to_payload(const GenerateResponse& response) {
  json meshes = json::array();
  for (const auto& m : response.meshes) meshes.push_back(mesh_to_json(m));
  return {{"meshes", std::move(meshes)}};
}

GenerateResponse response_from_payload(const json& payload, const std::string& request_id) {
  GenerateResponse r;
  r.request_id = request_id;
  if (!payload.is_object() || !payload.contains("meshes") || !payload.at("meshes").is_array())
    bad("payload.meshes", "expected an array");
  const json& meshes = payload.at("meshes");
  for (std::size_t i = 0; i < meshes.size(); ++i)
    r.meshes.push_back(mesh_from_json(meshes[i], "payload.meshes[" + std::to_string(i) + "]"));
  return r;
}

}  // namespace holme
