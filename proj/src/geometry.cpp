#include "holme/geometry.hpp"
#include "holme/errors.hpp"

#include <algorithm>

namespace holme {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateCorners: return "DegenerateCorners";
    case ErrorCode::kDegenerateSegment: return "DegenerateSegment";
    case ErrorCode::kEmptyMesh: return "EmptyMesh";
    case ErrorCode::kDegenerateBounds: return "DegenerateBounds";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kEmptySketch: return "EmptySketch";
    case ErrorCode::kGenerationFailed: return "GenerationFailed";
    case ErrorCode::kBindFailed: return "BindFailed";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kEmptyScene: return "EmptyScene";
    case ErrorCode::kDegenerateCorrespondence: return "DegenerateCorrespondence";
    case ErrorCode::kNoFeasibleMatching: return "NoFeasibleMatching";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kUnknownWeather: return "UnknownWeather";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

double point_segment_distance(const Point3& p, const Point3& a,
                              const Point3& b) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

AABB bounds_of(std::span<const Point3> points) {
  if (points.empty()) throw Error(ErrorCode::kEmptyInput, "no points to bound");
  AABB box = AABB::of_point(points.front());
  for (const auto& p : points.subspan(1)) box.expand(p);
  return box;
}

}  // namespace holme
