#pragma once

#include "holme/geometry.hpp"
#include "holme/scene.hpp"

#include <optional>
#include <string>
#include <vector>

namespace holme {

inline constexpr double kDefaultIouThreshold = 0.5;
inline constexpr double kDefaultTieEpsilon = 0.01;

/// Axis-aligned rectangle on the ground plane, (x, z) in meters.
struct Rect {
  double min_x = 0.0, min_z = 0.0, max_x = 0.0, max_z = 0.0;

  double area() const { return (max_x - min_x) * (max_z - min_z); }
  bool operator==(const Rect&) const = default;
};

struct Footprint2D {
  std::string object_id;
  Point2 center = Point2::Zero();  // (x, z)
  Rect bbox;
  std::optional<std::string> category;
};

/// Top-down plan. North is -z, east is +x.
struct ScenePlan {
  std::vector<Footprint2D> footprints;
};

struct MatchedPair {
  std::size_t sketch_index;
  std::size_t truth_index;
};

struct Matching {
  std::vector<MatchedPair> pairs;  // sorted by sketch_index
  std::vector<std::size_t> unmatched_truth;
  std::vector<std::size_t> unmatched_sketch;
  double total_cost = 0.0;  // summed in pair order
};

using Homography = Eigen::Matrix3d;

// Projection and rectification -------------------------------------------------

ScenePlan project_topdown(const Scene& scene);

/// Direct linear solve of the 8-unknown system with h33 = 1 on
/// Hartley-normalized coordinates. Throws DegenerateCorrespondence when three
/// source (or target) points are collinear.
Homography rectify(const std::array<Point2, 4>& observed,
                   const std::array<Point2, 4>& targets);

Point2 apply_homography(const Homography& h, const Point2& p);
ScenePlan apply_homography(const Homography& h, const ScenePlan& plan);

// Matching ------------------------------------------------------------------

/// Minimum total center-distance assignment (Hungarian). With
/// `category_locked`, pairs of differing categories are forbidden; throws
/// NoFeasibleMatching if no assignment of size min(|sketch|, |truth|) exists.
Matching match_objects(const ScenePlan& sketch, const ScenePlan& truth,
                       bool category_locked = false);

/// Hungarian algorithm on a rows x cols cost matrix (rows <= cols), returning
/// the column assigned to each row.
std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost);

// Scores -------------------------------------------------------------------------

struct PairScore {
  std::size_t sketch_index;
  std::size_t truth_index;
  double value;
};

struct OpaResult {
  std::vector<PairScore> distances;
  std::vector<PairScore> scores;  // 1 / (1 + d)
  double mean = 0.0;              // unmatched truth objects count as 0
  std::size_t truth_count = 0;
};

struct OdaResult {
  std::vector<PairScore> iou;
  std::vector<int> binary;
  double mean_iou = 0.0;
  double binary_fraction = 0.0;
  double tau = kDefaultIouThreshold;
  std::size_t truth_count = 0;
};

struct OtaResult {
  std::size_t preserved = 0;
  std::size_t total = 0;
  double score() const { return total == 0 ? 0.0 : static_cast<double>(preserved) / total; }
};

struct BatchNormalization {
  std::vector<double> values;
  bool degenerate = false;  // max == min, raw values returned
};

double rect_iou(const Rect& a, const Rect& b);

OpaResult opa(const Matching& matching, const ScenePlan& sketch,
              const ScenePlan& truth);

/// Min-max normalization over one batch of per-pair OPA scores.
BatchNormalization normalize_batch(const std::vector<double>& scores);

OdaResult oda(const Matching& matching, const ScenePlan& sketch,
              const ScenePlan& truth, double tau = kDefaultIouThreshold);

/// Pairwise north-south / east-west relation preservation over matched
/// objects. Throws TooFewPairs below two pairs.
OtaResult ota(const Matching& matching, const ScenePlan& sketch,
              const ScenePlan& truth, double tie_epsilon = kDefaultTieEpsilon);

// Scorecard ------------------------------------------------------------------

struct ScorecardEntry {
  std::string rater_id;
  std::string condition;
  std::array<int, 4> ratings{};  // SL, OP, SR, OD, each in [1, 7]
};

inline constexpr std::array<const char*, 4> kScorecardDimensions{"SL", "OP", "SR", "OD"};

struct DimensionSummary {
  double mean = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct ConditionSummary {
  std::string condition;
  std::size_t n = 0;
  bool small_n = false;
  std::array<DimensionSummary, 4> dimensions;
};

/// Per condition (sorted by name): mean, sample SD, mean +/- 1.96 SD / sqrt(n).
std::vector<ConditionSummary> aggregate_scorecard(
    const std::vector<ScorecardEntry>& entries);

/// CSV with header rater_id,condition,SL,OP,SR,OD.
std::vector<ScorecardEntry> parse_scorecard_csv(std::string_view text);

}  // namespace holme
