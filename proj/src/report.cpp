#include "holme/report.hpp"

#include <algorithm>

namespace holme {

using nlohmann::json;

SceneEvaluation evaluate_plans(ScenePlan sketch, ScenePlan truth, const EvalOptions& options) {
  SceneEvaluation e;
  e.sketch = std::move(sketch);
  e.truth = std::move(truth);
  e.tie_epsilon = options.tie_epsilon;
  e.matching = match_objects(e.sketch, e.truth, options.category_locked);
  e.opa = opa(e.matching, e.sketch, e.truth);
  e.oda = oda(e.matching, e.sketch, e.truth, options.iou_threshold);
  if (e.matching.pairs.size() >= 2)
    e.ota = ota(e.matching, e.sketch, e.truth, options.tie_epsilon);
  return e;
}

SceneEvaluation evaluate_scenes(const Scene& sketch, const Scene& truth,
                                const EvalOptions& options) {
  return evaluate_plans(project_topdown(sketch), project_topdown(truth), options);
}

namespace {

const std::string& sketch_id(const SceneEvaluation& e, std::size_t i) {
  return e.sketch.footprints.at(i).object_id;
}
const std::string& truth_id(const SceneEvaluation& e, std::size_t i) {
  return e.truth.footprints.at(i).object_id;
}

json section(const SceneEvaluation& e, const std::vector<double>* normalized,
             bool degenerate, std::vector<std::string> flags) {
  json matching = json::array();
  json opa_pairs = json::array();
  for (std::size_t k = 0; k < e.matching.pairs.size(); ++k) {
    const auto& p = e.matching.pairs[k];
    matching.push_back({{"sketch_id", sketch_id(e, p.sketch_index)},
                        {"truth_id", truth_id(e, p.truth_index)},
                        {"distance", e.opa.distances[k].value}});
    opa_pairs.push_back({{"sketch_id", sketch_id(e, p.sketch_index)},
                         {"truth_id", truth_id(e, p.truth_index)},
                         {"distance", e.opa.distances[k].value},
                         {"score", e.opa.scores[k].value}});
  }

  json opa = {{"pairs", opa_pairs}, {"mean", e.opa.mean}, {"normalized", nullptr}};
  if (normalized) {
    json npairs = json::array();
    double sum = 0.0;
    for (std::size_t k = 0; k < normalized->size(); ++k) {
      const auto& p = e.matching.pairs[k];
      npairs.push_back({{"sketch_id", sketch_id(e, p.sketch_index)},
                        {"truth_id", truth_id(e, p.truth_index)},
                        {"score", (*normalized)[k]}});
      sum += (*normalized)[k];
    }
    const double mean = e.opa.truth_count ? sum / static_cast<double>(e.opa.truth_count) : 0.0;
    opa["normalized"] = {{"pairs", npairs}, {"mean", mean}, {"degenerate", degenerate}};
  }

  json oda_pairs = json::array();
  for (std::size_t k = 0; k < e.oda.iou.size(); ++k) {
    const auto& p = e.matching.pairs[k];
    oda_pairs.push_back({{"sketch_id", sketch_id(e, p.sketch_index)},
                         {"truth_id", truth_id(e, p.truth_index)},
                         {"iou", e.oda.iou[k].value},
                         {"binary", e.oda.binary[k]}});
  }
  const json oda = {{"tau", e.oda.tau},
                    {"pairs", oda_pairs},
                    {"mean_iou", e.oda.mean_iou},
                    {"binary_fraction", e.oda.binary_fraction}};

  json unmatched_truth = json::array();
  for (auto j : e.matching.unmatched_truth) unmatched_truth.push_back(truth_id(e, j));
  json unmatched_sketch = json::array();
  for (auto i : e.matching.unmatched_sketch) unmatched_sketch.push_back(sketch_id(e, i));
  if (!e.matching.unmatched_truth.empty()) flags.emplace_back("unmatched_truth");
  if (!e.matching.unmatched_sketch.empty()) flags.emplace_back("unmatched_sketch");

  json ota = nullptr;
  json ota_detail = nullptr;
  if (e.ota) {
    ota = e.ota->score();
    ota_detail = {{"preserved", e.ota->preserved},
                  {"total", e.ota->total},
                  {"tie_epsilon", e.tie_epsilon}};
  } else {
    flags.emplace_back("ota_undefined_too_few_pairs");
  }

  return {{"opa", std::move(opa)},
          {"oda", oda},
          {"ota", ota},
          {"ota_detail", ota_detail},
          {"matching", std::move(matching)},
          {"unmatched", {{"truth", unmatched_truth}, {"sketch", unmatched_sketch}}},
          {"counts",
           {{"sketch", e.sketch.footprints.size()}, {"truth", e.truth.footprints.size()}}},
          {"flags", flags}};
}

}  // namespace

json report_json(const SceneEvaluation& eval) {
  return section(eval, nullptr, false, {"opa_raw_only"});
}

json batch_report_json(const std::vector<SceneEvaluation>& evals) {
  std::vector<double> population;
  for (const auto& e : evals)
    for (const auto& s : e.opa.scores) population.push_back(s.value);
  const BatchNormalization norm = normalize_batch(population);

  json scenes = json::array();
  std::size_t offset = 0;
  for (const auto& e : evals) {
    const std::vector<double> share(norm.values.begin() + static_cast<std::ptrdiff_t>(offset),
                                    norm.values.begin() +
                                        static_cast<std::ptrdiff_t>(offset + e.opa.scores.size()));
    offset += e.opa.scores.size();
    std::vector<std::string> flags;
    if (norm.degenerate) flags.emplace_back("opa_normalization_degenerate");
    scenes.push_back({{"name", e.name}, {"report", section(e, &share, norm.degenerate, flags)}});
  }

  json summary = {{"scenes", evals.size()}, {"pairs", population.size()}, {"degenerate", norm.degenerate}};
  if (!population.empty()) {
    const auto [lo, hi] = std::minmax_element(population.begin(), population.end());
    summary["min"] = *lo;
    summary["max"] = *hi;
  }
  json flags = json::array();
  if (norm.degenerate) flags.push_back("opa_normalization_degenerate");
  return {{"batch", summary}, {"scenes", scenes}, {"flags", flags}};
}

json scorecard_json(const std::vector<ConditionSummary>& summary) {
  json conditions = json::array();
  for (const auto& c : summary) {
    json dims = json::object();
    for (std::size_t d = 0; d < kScorecardDimensions.size(); ++d) {
      const auto& s = c.dimensions[d];
      dims[kScorecardDimensions[d]] = {
          {"mean", s.mean}, {"sd", s.sd}, {"ci_low", s.ci_low}, {"ci_high", s.ci_high}};
    }
    conditions.push_back(
        {{"condition", c.condition}, {"n", c.n}, {"small_n", c.small_n}, {"dimensions", dims}});
  }
  return {{"conditions", conditions}};
}

}  // namespace holme
