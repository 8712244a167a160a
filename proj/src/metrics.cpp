#include "holme/metrics.hpp"

#include "holme/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace holme {

ScenePlan project_topdown(const Scene& scene) {
  if (scene.objects().empty()) throw Error(ErrorCode::kEmptyScene, "scene has no objects");
  ScenePlan plan;
  for (const auto& object : scene.objects()) {
    const AABB box = world_aabb(object);
    Footprint2D fp;
    fp.object_id = object.id;
    fp.bbox = {box.min.x(), box.min.z(), box.max.x(), box.max.z()};
    fp.center = {0.5 * (box.min.x() + box.max.x()), 0.5 * (box.min.z() + box.max.z())};
    if (!object.label.empty()) fp.category = object.label;
    plan.footprints.push_back(std::move(fp));
  }
  return plan;
}

namespace {

// Translate to the centroid and scale so the mean distance is sqrt(2).
Eigen::Matrix3d normalizing_transform(const std::array<Point2, 4>& pts) {
  Point2 centroid = Point2::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= 4.0;
  double mean = 0.0;
  for (const auto& p : pts) mean += (p - centroid).norm();
  mean /= 4.0;
  const double s = std::sqrt(2.0) / mean;
  Eigen::Matrix3d t;
  t << s, 0, -s * centroid.x(), 0, s, -s * centroid.y(), 0, 0, 1;
  return t;
}

void check_general_position(const std::array<Point2, 4>& pts, const char* which) {
  double scale = 0.0;
  for (const auto& a : pts)
    for (const auto& b : pts) scale = std::max(scale, (a - b).norm());
  if (scale == 0.0)
    throw Error(ErrorCode::kDegenerateCorrespondence,
                std::string(which) + " points coincide");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const Point2 u = pts[j] - pts[i];
        const Point2 v = pts[k] - pts[i];
        if (std::abs(u.x() * v.y() - u.y() * v.x()) <= 1e-10 * scale * scale)
          throw Error(ErrorCode::kDegenerateCorrespondence,
                      std::string("three ") + which + " points are collinear");
      }
}

}  // namespace

Homography rectify(const std::array<Point2, 4>& observed,
                   const std::array<Point2, 4>& targets) {
  check_general_position(observed, "source");
  check_general_position(targets, "target");

  const Eigen::Matrix3d ts = normalizing_transform(observed);
  const Eigen::Matrix3d tt = normalizing_transform(targets);

  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d s = ts * observed[i].homogeneous();
    const Eigen::Vector3d t = tt * targets[i].homogeneous();
    const double x = s.x(), y = s.y(), u = t.x(), v = t.y();
    a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
    a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
    b(2 * i) = u;
    b(2 * i + 1) = v;
  }
  const Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible())
    throw Error(ErrorCode::kDegenerateCorrespondence, "singular correspondence system");
  const Eigen::Matrix<double, 8, 1> h = lu.solve(b);

  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
  Homography out = tt.inverse() * hn * ts;
  if (std::abs(out(2, 2)) > 1e-300) out /= out(2, 2);
  return out;
}

Point2 apply_homography(const Homography& h, const Point2& p) {
  return (h * p.homogeneous()).hnormalized();
}

ScenePlan apply_homography(const Homography& h, const ScenePlan& plan) {
  ScenePlan out = plan;
  for (auto& fp : out.footprints) {
    fp.center = apply_homography(h, fp.center);
    const std::array<Point2, 4> corners{
        Point2(fp.bbox.min_x, fp.bbox.min_z), Point2(fp.bbox.max_x, fp.bbox.min_z),
        Point2(fp.bbox.max_x, fp.bbox.max_z), Point2(fp.bbox.min_x, fp.bbox.max_z)};
    Point2 lo = Point2::Constant(std::numeric_limits<double>::infinity());
    Point2 hi = -lo;
    for (const auto& c : corners) {
      const Point2 m = apply_homography(h, c);
      lo = lo.cwiseMin(m);
      hi = hi.cwiseMax(m);
    }
    fp.bbox = {lo.x(), lo.y(), hi.x(), hi.y()};
  }
  return out;
}

std::vector<std::size_t> solve_assignment(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  if (n > m) throw Error(ErrorCode::kInvalidArgument, "assignment needs rows <= cols");
  if (n == 0) return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual start.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1),
                                static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

Matching match_objects(const ScenePlan& sketch, const ScenePlan& truth,
                       bool category_locked) {
  const std::size_t ns = sketch.footprints.size();
  const std::size_t nt = truth.footprints.size();
  if (ns == 0 || nt == 0)
    throw Error(ErrorCode::kEmptyInput, "matching needs two non-empty plans");

  const bool transpose = ns > nt;
  const std::size_t rows = transpose ? nt : ns;
  const std::size_t cols = transpose ? ns : nt;

  Eigen::MatrixXd dist(ns, nt);
  std::vector<std::vector<bool>> forbidden(ns, std::vector<bool>(nt, false));
  double max_finite = 0.0;
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      const auto& a = sketch.footprints[i];
      const auto& b = truth.footprints[j];
      dist(i, j) = (a.center - b.center).norm();
      forbidden[i][j] = category_locked && a.category != b.category;
      if (!forbidden[i][j]) max_finite = std::max(max_finite, dist(i, j));
    }
  // Any feasible assignment costs less than one forbidden pair.
  const double big = (max_finite + 1.0) * static_cast<double>(rows + 1);

  Eigen::MatrixXd cost(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = transpose ? c : r;
      const std::size_t j = transpose ? r : c;
      cost(r, c) = forbidden[i][j] ? big : dist(i, j);
    }
  const std::vector<std::size_t> assignment = solve_assignment(cost);

  Matching m;
  std::vector<bool> sketch_used(ns, false), truth_used(nt, false);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = transpose ? assignment[r] : r;
    const std::size_t j = transpose ? r : assignment[r];
    if (forbidden[i][j])
      throw Error(ErrorCode::kNoFeasibleMatching,
                  "no category-consistent assignment covers every object");
    m.pairs.push_back({i, j});
    sketch_used[i] = truth_used[j] = true;
  }
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.sketch_index < b.sketch_index; });
  for (const auto& pr : m.pairs) m.total_cost += dist(pr.sketch_index, pr.truth_index);
  for (std::size_t j = 0; j < nt; ++j)
    if (!truth_used[j]) m.unmatched_truth.push_back(j);
  for (std::size_t i = 0; i < ns; ++i)
    if (!sketch_used[i]) m.unmatched_sketch.push_back(i);
  return m;
}

double rect_iou(const Rect& a, const Rect& b) {
  const double ix = std::max(0.0, std::min(a.max_x, b.max_x) - std::max(a.min_x, b.min_x));
  const double iz = std::max(0.0, std::min(a.max_z, b.max_z) - std::max(a.min_z, b.min_z));
  const double inter = ix * iz;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return a == b ? 1.0 : 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

OpaResult opa(const Matching& matching, const ScenePlan& sketch,
              const ScenePlan& truth) {
  OpaResult r;
  r.truth_count = truth.footprints.size();
  double sum = 0.0;
  for (const auto& pr : matching.pairs) {
    const double d = (sketch.footprints.at(pr.sketch_index).center -
                      truth.footprints.at(pr.truth_index).center)
                         .norm();
    const double s = 1.0 / (1.0 + d);
    r.distances.push_back({pr.sketch_index, pr.truth_index, d});
    r.scores.push_back({pr.sketch_index, pr.truth_index, s});
    sum += s;
  }
  r.mean = r.truth_count == 0 ? 0.0 : sum / static_cast<double>(r.truth_count);
  return r;
}

BatchNormalization normalize_batch(const std::vector<double>& scores) {
  BatchNormalization out;
  if (scores.empty()) {
    out.degenerate = true;
    return out;
  }
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo, max = *hi;
  if (max == min) {
    out.values = scores;
    out.degenerate = true;
    return out;
  }
  for (double s : scores) out.values.push_back((s - min) / (max - min));
  return out;
}

OdaResult oda(const Matching& matching, const ScenePlan& sketch,
              const ScenePlan& truth, double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "IoU threshold must be in (0, 1)");
  OdaResult r;
  r.tau = tau;
  r.truth_count = truth.footprints.size();
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& pr : matching.pairs) {
    const double iou = rect_iou(sketch.footprints.at(pr.sketch_index).bbox,
                                truth.footprints.at(pr.truth_index).bbox);
    r.iou.push_back({pr.sketch_index, pr.truth_index, iou});
    const int bin = iou > tau ? 1 : 0;
    r.binary.push_back(bin);
    sum += iou;
    hits += static_cast<std::size_t>(bin);
  }
  if (r.truth_count > 0) {
    r.mean_iou = sum / static_cast<double>(r.truth_count);
    r.binary_fraction = static_cast<double>(hits) / static_cast<double>(r.truth_count);
  }
  return r;
}

OtaResult ota(const Matching& matching, const ScenePlan& sketch,
              const ScenePlan& truth, double tie_epsilon) {
  if (matching.pairs.size() < 2)
    throw Error(ErrorCode::kTooFewPairs, "topology needs >= 2 matched pairs");
  auto relation = [tie_epsilon](double delta) {
    if (std::abs(delta) <= tie_epsilon) return 0;
    return delta > 0.0 ? 1 : -1;
  };
  OtaResult r;
  const auto& pairs = matching.pairs;
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const Point2 dt = truth.footprints.at(pairs[b].truth_index).center -
                        truth.footprints.at(pairs[a].truth_index).center;
      const Point2 ds = sketch.footprints.at(pairs[b].sketch_index).center -
                        sketch.footprints.at(pairs[a].sketch_index).center;
      for (int axis : {1, 0}) {  // north-south (z), east-west (x)
        ++r.total;
        if (relation(dt[axis]) == relation(ds[axis])) ++r.preserved;
      }
    }
  return r;
}

std::vector<ConditionSummary> aggregate_scorecard(
    const std::vector<ScorecardEntry>& entries) {
  if (entries.empty()) throw Error(ErrorCode::kEmptyInput, "no scorecard entries");
  std::map<std::string, std::vector<const ScorecardEntry*>> by_condition;
  for (const auto& e : entries) {
    for (int r : e.ratings)
      if (r < 1 || r > 7)
        throw Error(ErrorCode::kInvalidArgument,
                    "rating " + std::to_string(r) + " outside [1, 7]");
    by_condition[e.condition].push_back(&e);
  }

  std::vector<ConditionSummary> out;
  for (const auto& [condition, group] : by_condition) {
    ConditionSummary s;
    s.condition = condition;
    s.n = group.size();
    s.small_n = s.n < 2;
    const double n = static_cast<double>(s.n);
    for (std::size_t d = 0; d < 4; ++d) {
      double sum = 0.0;
      for (const auto* e : group) sum += e->ratings[d];
      const double mean = sum / n;
      double ss = 0.0;
      for (const auto* e : group) ss += (e->ratings[d] - mean) * (e->ratings[d] - mean);
      const double sd = s.n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      const double half = 1.96 * sd / std::sqrt(n);
      s.dimensions[d] = {mean, sd, mean - half, mean + half};
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::vector<ScorecardEntry> parse_scorecard_csv(std::string_view text) {
  std::vector<ScorecardEntry> out;
  std::stringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      const std::vector<std::string> expected{"rater_id", "condition", "SL", "OP", "SR", "OD"};
      if (cells != expected)
        throw ParseError(line_no, "expected header rater_id,condition,SL,OP,SR,OD");
      header_seen = true;
      continue;
    }
    if (cells.size() != 6) throw ParseError(line_no, "expected 6 columns");
    ScorecardEntry e;
    e.rater_id = cells[0];
    e.condition = cells[1];
    for (int d = 0; d < 4; ++d) {
      const std::string& c = cells[static_cast<std::size_t>(2 + d)];
      int value = 0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), value);
      if (ec != std::errc{} || ptr != c.data() + c.size())
        throw ParseError(line_no, "rating '" + c + "' is not an integer");
      if (value < 1 || value > 7)
        throw ParseError(line_no, "rating " + c + " outside [1, 7]");
      e.ratings[static_cast<std::size_t>(d)] = value;
    }
    out.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError(1, "missing header");
  return out;
}

}  // namespace holme
