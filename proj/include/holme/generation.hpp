#pragma once

#include "holme/mesh.hpp"
#include "holme/stroke.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holme {

inline constexpr int kMaxVariants = 8;
inline constexpr int kTubeSides = 8;
/// Tube radius as a fraction of the sketch's largest extent.
inline constexpr double kTubeRadiusFraction = 0.02;
/// Upper bound on per-vertex jitter as a fraction of the largest extent.
inline constexpr double kJitterFraction = 0.01;

struct EncodedStroke {
  std::vector<Point3> points;  // workspace-local
  std::vector<double> timestamps;

  bool operator==(const EncodedStroke&) const = default;
};

/// Workspace-local strokes in drawing order, timestamps rebased to the first
/// sample of the first stroke.
struct SketchEncoding {
  std::vector<EncodedStroke> strokes;

  bool operator==(const SketchEncoding&) const = default;
};

enum class GeneratorKind { kTubes, kHull };

std::string_view to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator(std::string_view name);

struct GenerateRequest {
  std::string request_id;
  SketchEncoding encoding;
  GeneratorKind generator = GeneratorKind::kTubes;
  int variants = 1;
  std::uint64_t seed = 0;
};

struct GenerateResponse {
  std::string request_id;
  std::vector<Mesh> meshes;
};

/// Throws EmptySketch for a sketch without strokes.
SketchEncoding encode_sketch(const Sketch& sketch);

/// Bounds of every encoded point.
AABB encoding_bounds(const SketchEncoding& encoding);

/// Sketch-to-mesh backend. Implementations are stateless and may be called
/// concurrently.
class Generator {
 public:
  virtual ~Generator() = default;
  /// Raw geometry for one sketch, before jitter and normalization.
  virtual Mesh build(const SketchEncoding& encoding) const = 0;
};

/// Union of one tube per stroke, radius proportional to the sketch extent.
class TubeGenerator final : public Generator {
 public:
  Mesh build(const SketchEncoding& encoding) const override;
};

/// Convex hull of every stroke point.
class HullGenerator final : public Generator {
 public:
  Mesh build(const SketchEncoding& encoding) const override;
};

const Generator& generator_for(GeneratorKind kind);

/// Deterministic displacement of every vertex, magnitude at most
/// `max_displacement`, derived from (seed, variant) only.
void apply_jitter(Mesh& mesh, std::uint64_t seed, int variant,
                  double max_displacement);

/// Pure function of the request. Variant 0 is unjittered; every mesh is
/// normalized to the sketch bounds. Throws GenerationFailed on degenerate
/// input and InvalidArgument when variants is outside [1, 8].
GenerateResponse generate(const GenerateRequest& request);

// Wire payloads ------------------------------------------------------------------

/// Payload of a "generate" envelope. `fallback` fills a missing generator.
/// Throws SchemaError located by JSON path.
GenerateRequest request_from_payload(const nlohmann::json& payload,
                                     const std::string& request_id,
                                     GeneratorKind fallback);
nlohmann::json request_to_payload(const GenerateRequest& request);

nlohmann::json response_to_payload(const GenerateResponse& response);
GenerateResponse response_from_payload(const nlohmann::json& payload,
                                       const std::string& request_id);

}  // namespace holme
