#pragma once

#include "holme/metrics.hpp"
#include "holme/scene.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace holme {

struct EvalOptions {
  double iou_threshold = kDefaultIouThreshold;
  double tie_epsilon = kDefaultTieEpsilon;
  bool category_locked = false;
};

/// Scores of one sketch scene against its ground truth.
struct SceneEvaluation {
  std::string name;
  ScenePlan sketch;
  ScenePlan truth;
  Matching matching;
  OpaResult opa;
  OdaResult oda;
  std::optional<OtaResult> ota;  // absent below two matched pairs
  double tie_epsilon = kDefaultTieEpsilon;
};

SceneEvaluation evaluate_plans(ScenePlan sketch, ScenePlan truth,
                               const EvalOptions& options = {});
SceneEvaluation evaluate_scenes(const Scene& sketch, const Scene& truth,
                                const EvalOptions& options = {});

/// Single-scene report; OPA stays raw and is flagged "opa_raw_only".
nlohmann::json report_json(const SceneEvaluation& eval);

/// Batch report: every per-pair OPA score across all scenes is min-max
/// normalized as one population, and each scene section carries its share.
nlohmann::json batch_report_json(const std::vector<SceneEvaluation>& evals);

nlohmann::json scorecard_json(const std::vector<ConditionSummary>& summary);

}  // namespace holme
