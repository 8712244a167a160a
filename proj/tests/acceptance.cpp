// Acceptance run: one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failed criteria.

#include "fixture_scenes.hpp"
#include "oracles.hpp"
#include "test_client.hpp"

#include "holme/errors.hpp"
#include "holme/generation.hpp"
#include "holme/io.hpp"
#include "holme/mesh.hpp"
#include "holme/metrics.hpp"
#include "holme/protocol.hpp"
#include "holme/report.hpp"
#include "holme/server.hpp"
#include "holme/stroke.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace holme {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

// Tolerances
constexpr int kMatchingCases = 200;
constexpr std::size_t kMatchingMaxObjects = 7;
constexpr double kMatchingBudgetSeconds = 10.0;
constexpr double kInvarianceTolerance = 1e-12;
constexpr int kRdpCases = 100;
constexpr std::size_t kRdpMaxPoints = 30;
constexpr int kHomographyCases = 50;
constexpr double kHomographyTolerance = 1e-9;
constexpr double kHomographyIdentityTolerance = 1e-12;
constexpr int kHullClouds = 100;
constexpr double kConvexityTolerance = 1e-9;
constexpr int kConcurrentClients = 16;
constexpr double kSuiteBudgetSeconds = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Footprint2D square(std::string id, Point2 c, double half, std::optional<std::string> category = {}) {
  return {std::move(id), c, Rect{c.x() - half, c.y() - half, c.x() + half, c.y() + half},
          std::move(category)};
}

ScenePlan translated(const ScenePlan& plan, const Point2& t) {
  ScenePlan out = plan;
  for (auto& f : out.footprints) {
    f.center += t;
    f.bbox = {f.bbox.min_x + t.x(), f.bbox.min_z + t.y(), f.bbox.max_x + t.x(), f.bbox.max_z + t.y()};
  }
  return out;
}

// --- criteria ---------------------------------------------------------------

Outcome matching_oracle() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> count(1, kMatchingMaxObjects);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  const auto start = Clock::now();
  int mismatches = 0;
  double worst = 0.0;
  for (int c = 0; c < kMatchingCases; ++c) {
    ScenePlan sketch, truth;
    std::vector<Point2> sc, tc;
    const std::size_t ns = count(rng), nt = count(rng);
    for (std::size_t i = 0; i < ns; ++i) {
      sc.emplace_back(coord(rng), coord(rng));
      sketch.footprints.push_back(square("s" + std::to_string(i), sc.back(), 0.2));
    }
    for (std::size_t i = 0; i < nt; ++i) {
      tc.emplace_back(coord(rng), coord(rng));
      truth.footprints.push_back(square("t" + std::to_string(i), tc.back(), 0.2));
    }
    const Matching m = match_objects(sketch, truth);
    // Re-sum the assignment in the oracle's order (smaller side ascending) so
    // equal assignments produce bit-identical totals.
    std::vector<double> by_small(std::min(ns, nt), 0.0);
    for (const auto& p : m.pairs) {
      const double d = (sc[p.sketch_index] - tc[p.truth_index]).norm();
      by_small.at(ns <= nt ? p.sketch_index : p.truth_index) = d;
    }
    double total = 0.0;
    for (double d : by_small) total += d;
    const double expected = oracle::min_assignment_cost(sc, tc);
    worst = std::max(worst, std::abs(m.total_cost - expected));
    if (m.pairs.size() != std::min(ns, nt) || total != expected) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < kMatchingBudgetSeconds,
          strf("%d cases, %d mismatches, max |reported - oracle| %.3g, %.2f s", kMatchingCases,
               mismatches, worst, elapsed)};
}

Outcome identity_evaluation() {
  const Scene truth = testing::coffee_shop();
  const SceneEvaluation e = evaluate_scenes(truth, truth);
  bool all_iou = true;
  for (const auto& p : e.oda.iou) all_iou = all_iou && p.value == 1.0;
  const double ota_score = e.ota ? e.ota->score() : -1.0;
  return {e.opa.mean == 1.0 && all_iou && e.oda.iou.size() == truth.objects().size() &&
              ota_score == 1.0,
          strf("OPA %.17g, IoU all 1: %s, OTA %.17g", e.opa.mean, all_iou ? "yes" : "no", ota_score)};
}

Outcome distortion_monotonicity() {
  const Scene truth = testing::coffee_shop();
  bool pass = true;
  std::string detail = "OPA(sigma)";

  // Position noise: common random numbers per seed, averaged over seeds.
  const std::vector<double> sigmas{0.0, 0.1, 0.3, 1.0};
  double prev = 2.0;
  for (double sigma : sigmas) {
    double sum = 0.0;
    const int seeds = 10;
    for (int s = 1; s <= seeds; ++s)
      sum += evaluate_scenes(testing::distorted(truth, sigma, 1.0, s), truth).opa.mean;
    const double mean = sum / seeds;
    detail += strf(" %.4f", mean);
    pass = pass && mean < prev;
    prev = mean;
  }

  // Object size: every object scaled uniformly in place; concentric squares
  // give IoU = 1 / s^2 exactly.
  detail += "; IoU(scale)";
  prev = 2.0;
  for (double s : {1.0, 1.3, 2.0}) {
    Scene sketch = truth;
    for (auto& o : sketch.objects()) o.transform.scale *= s;
    const double iou = evaluate_scenes(sketch, truth).oda.mean_iou;
    detail += strf(" %.4f", iou);
    pass = pass && iou < prev && std::abs(iou - 1.0 / (s * s)) < 1e-12;
    prev = iou;
  }

  // Swap: the farthest pair of differently labelled objects with no third
  // object between or tied with them on either axis, so exactly the pair's
  // own two relations flip.
  const double eps = kDefaultTieEpsilon;
  const ScenePlan plan = project_topdown(truth);
  const auto& fp = plan.footprints;
  const std::size_t n = fp.size();
  auto qualifies = [&](std::size_t a, std::size_t b) {
    if (fp[a].category == fp[b].category) return false;
    for (int k = 0; k < 2; ++k) {
      const double ca = fp[a].center[k], cb = fp[b].center[k];
      if (std::abs(ca - cb) <= eps) return false;
      for (std::size_t m = 0; m < n; ++m) {
        if (m == a || m == b) continue;
        const double cm = fp[m].center[k];
        if (std::abs(cm - ca) <= eps || std::abs(cm - cb) <= eps) return false;
        if ((cm < ca) != (cm < cb)) return false;
      }
    }
    return true;
  };
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_dist = -1.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (qualifies(a, b) && (fp[a].center - fp[b].center).norm() > best_dist) {
        best_dist = (fp[a].center - fp[b].center).norm();
        best = {{a, b}};
      }
  if (!best) return {false, detail + "; no tie-free swap pair in fixture"};

  const EvalOptions locked{kDefaultIouThreshold, eps, true};
  Scene swapped = truth;
  auto& oa = swapped.objects()[best->first].transform.position;
  auto& ob = swapped.objects()[best->second].transform.position;
  std::swap(oa.x(), ob.x());
  std::swap(oa.z(), ob.z());
  const OtaResult base = evaluate_scenes(truth, truth, locked).ota.value();
  const OtaResult after = evaluate_scenes(swapped, truth, locked).ota.value();
  const std::size_t relations = 2 * (n * (n - 1) / 2);
  const double expected_drop = 2.0 / static_cast<double>(relations);
  const double drop = base.score() - after.score();
  const bool exact = after.total == relations && base.preserved == relations &&
                     after.preserved == relations - 2;
  pass = pass && exact;
  detail += strf("; swap %s<->%s (%.2f m): OTA %zu/%zu -> %zu/%zu, drop %.6f (expected %.6f)",
                 fp[best->first].object_id.c_str(), fp[best->second].object_id.c_str(), best_dist,
                 base.preserved, base.total, after.preserved, after.total, drop, expected_drop);

  // A swap across the whole room also flips relations with every object in
  // between; the drop must match a direct count of sign changes.
  const std::size_t a = 0, b = 1;  // counter (north wall) and sofa (south-west corner)
  Scene across = truth;
  auto& pa = across.objects()[a].transform.position;
  auto& pb = across.objects()[b].transform.position;
  std::swap(pa.x(), pb.x());
  std::swap(pa.z(), pb.z());
  const ScenePlan moved = project_topdown(across);
  auto sign = [&](double d) { return std::abs(d) <= eps ? 0 : (d > 0 ? 1 : -1); };
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (int k = 0; k < 2; ++k)
        if (sign(fp[i].center[k] - fp[j].center[k]) !=
            sign(moved.footprints[i].center[k] - moved.footprints[j].center[k]))
          ++flipped;
  const OtaResult far = evaluate_scenes(across, truth, locked).ota.value();
  pass = pass && far.preserved == relations - flipped;
  detail += strf("; cross-room %s<->%s: %zu/%zu, counted flips %zu", fp[a].object_id.c_str(),
                 fp[b].object_id.c_str(), far.preserved, far.total, flipped);
  return {pass, detail};
}

Outcome metric_invariance() {
  const Scene truth = testing::coffee_shop();
  const ScenePlan t = project_topdown(truth);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  double worst = 0.0;
  for (int seed = 1; seed <= 5; ++seed) {
    const ScenePlan s = project_topdown(testing::distorted(truth, 0.3, 1.1, seed));
    const SceneEvaluation base = evaluate_plans(s, t);
    for (int k = 0; k < 10; ++k) {
      const Point2 d(shift(rng), shift(rng));
      const SceneEvaluation moved = evaluate_plans(translated(s, d), translated(t, d));
      worst = std::max({worst, std::abs(moved.opa.mean - base.opa.mean),
                        std::abs(moved.oda.mean_iou - base.oda.mean_iou),
                        std::abs(moved.oda.binary_fraction - base.oda.binary_fraction),
                        std::abs(moved.ota.value().score() - base.ota.value().score())});
    }
  }
  return {worst < kInvarianceTolerance, strf("50 translations, max change %.3g", worst)};
}

Outcome rdp_oracle() {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::size_t> count(2, kRdpMaxPoints);
  std::normal_distribution<double> step(0.0, 0.01);
  std::uniform_real_distribution<double> eps_dist(0.001, 0.03);
  int violations = 0, not_idempotent = 0, oracle_mismatch = 0;
  double worst_ratio = 0.0;
  for (int c = 0; c < kRdpCases; ++c) {
    std::vector<Point3> pts{Point3::Zero()};
    const std::size_t n = count(rng);
    while (pts.size() < n) pts.push_back(pts.back() + Vec3(step(rng), step(rng), step(rng)));
    const double eps = eps_dist(rng);
    const auto kept = simplify_indices(pts, eps);
    const auto simple = simplify_stroke(pts, eps);
    if (kept != oracle::rdp(pts, eps)) ++oracle_mismatch;
    std::vector<bool> is_kept(n, false);
    for (auto i : kept) is_kept[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_kept[i]) continue;
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k + 1 < simple.size(); ++k)
        d = std::min(d, point_segment_distance(pts[i], simple[k], simple[k + 1]));
      worst_ratio = std::max(worst_ratio, d / eps);
      if (d > eps) ++violations;
    }
    if (simplify_stroke(simple, eps) != simple) ++not_idempotent;
  }
  return {violations == 0 && not_idempotent == 0 && oracle_mismatch == 0,
          strf("%d polylines, %d distance violations (max d/eps %.3f), %d non-idempotent, "
               "%d differ from recursive reference",
               kRdpCases, violations, worst_ratio, not_idempotent, oracle_mismatch)};
}

bool three_collinear(const std::array<Point2, 4>& q, double min_area) {
  for (int i = 0; i < 4; ++i) {
    std::array<Point2, 3> t;
    for (int j = 0, k = 0; j < 4; ++j)
      if (j != i) t[k++] = q[j];
    const Point2 u = t[1] - t[0], v = t[2] - t[0];
    if (std::abs(u.x() * v.y() - u.y() * v.x()) < min_area) return true;
  }
  return false;
}

Outcome homography() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  auto random_quad = [&] {
    std::array<Point2, 4> q;
    do {
      for (auto& p : q) p = Point2(coord(rng), coord(rng));
    } while (three_collinear(q, 0.5));
    return q;
  };
  double worst = 0.0;
  for (int c = 0; c < kHomographyCases; ++c) {
    const auto src = random_quad(), dst = random_quad();
    const Homography h = rectify(src, dst);
    for (int i = 0; i < 4; ++i)
      worst = std::max(worst, (apply_homography(h, src[i]) - dst[i]).norm());
  }
  double worst_identity = 0.0;
  for (int c = 0; c < 10; ++c) {
    const auto q = random_quad();
    worst_identity = std::max(worst_identity,
                              (rectify(q, q) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
  }
  return {worst <= kHomographyTolerance && worst_identity <= kHomographyIdentityTolerance,
          strf("%d cases, max target error %.3g; identity max deviation %.3g", kHomographyCases,
               worst, worst_identity)};
}

Outcome watertightness() {
  std::mt19937_64 rng(1234);
  int leaky = 0, meshes = 0;
  std::normal_distribution<double> step(0.0, 0.05);
  std::uniform_int_distribution<int> sides(3, 16);
  std::uniform_int_distribution<std::size_t> length(2, 40);
  for (int c = 0; c < 50; ++c) {
    std::vector<Point3> pts{Point3::Zero()};
    const std::size_t n = length(rng);
    while (pts.size() < n) pts.push_back(pts.back() + Vec3(step(rng), step(rng), step(rng)));
    ++meshes;
    if (!is_watertight(tube_mesh_from_stroke(pts, 0.01, sides(rng)))) ++leaky;
  }

  std::uniform_int_distribution<std::size_t> cloud_size(4, 300);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_residual = 0.0;
  int hull_leaky = 0;
  for (int c = 0; c < kHullClouds; ++c) {
    std::vector<Point3> cloud(cloud_size(rng));
    for (auto& p : cloud) {
      switch (c % 3) {
        case 0: p = Point3(u(rng), u(rng), u(rng)); break;           // cube
        case 1: p = Point3(g(rng), g(rng), g(rng)).normalized(); break;  // sphere surface
        default: p = Point3(g(rng), 0.2 * g(rng), 5.0 * g(rng)); break;  // elongated
      }
    }
    const Mesh hull = convex_hull(cloud);
    ++meshes;
    if (!is_watertight(hull)) ++hull_leaky;
    for (const auto& t : hull.triangles) {
      const Point3 &a = hull.vertices[t[0]], &b = hull.vertices[t[1]], &c3 = hull.vertices[t[2]];
      const Vec3 normal = (b - a).cross(c3 - a).normalized();
      for (const auto& p : cloud) worst_residual = std::max(worst_residual, normal.dot(p - a));
    }
  }

  // Generator output for both back ends.
  for (auto kind : {GeneratorKind::kTubes, GeneratorKind::kHull}) {
    GenerateRequest req;
    req.encoding = encode_sketch(testing::chair_sketch());
    req.generator = kind;
    req.variants = 4;
    req.seed = 5;
    for (const auto& m : generate(req).meshes) {
      ++meshes;
      if (!is_watertight(m)) ++leaky;
    }
  }
  return {leaky == 0 && hull_leaky == 0 && worst_residual <= kConvexityTolerance,
          strf("%d meshes, %d open (%d hulls), hull convexity residual %.3g over %d clouds", meshes,
               leaky + hull_leaky, hull_leaky, worst_residual, kHullClouds)};
}

bool reply_shape_ok(const json& r, const std::string& type, const std::string& id) {
  return r.is_object() && r.value("type", "") == type && r.value("request_id", "") == id &&
         r.contains("payload") && r["payload"].is_object();
}

bool generate_result_ok(const json& r, const std::string& id, std::size_t variants) {
  if (!reply_shape_ok(r, "generate_result", id)) return false;
  const json& meshes = r["payload"]["meshes"];
  if (!meshes.is_array() || meshes.size() != variants) return false;
  for (const auto& m : meshes) {
    if (!m["vertices"].is_array() || !m["triangles"].is_array() || m["triangles"].empty()) return false;
    for (const auto& v : m["vertices"])
      if (!v.is_array() || v.size() != 3) return false;
  }
  return true;
}

Outcome protocol_conformance() {
  MessageHandler handler(GeneratorKind::kTubes);
  TcpServer server(handler);
  server.bind(0);
  std::thread runner([&] { server.run(); });
  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };

  try {
    testing::FrameClient c(server.port());
    expect(reply_shape_ok(c.request(make_envelope("ping", "p1", {{"k", 1}})), "pong", "p1"), "ping");

    const json gen = testing::generate_envelope("g1", testing::chair_sketch(), 3, 17);
    c.send(gen);
    const auto first = c.receive_frame();
    expect(first && generate_result_ok(json::parse(*first), "g1", 3), "generate");

    c.send_raw(encode_frame("{\"type\": \"ping\", "));
    const auto malformed = c.receive();
    expect(malformed && reply_shape_ok(*malformed, "error", "") &&
               (*malformed)["payload"].value("code", "") == "bad_payload",
           "malformed frame");

    json too_many = testing::generate_envelope("v1", testing::chair_sketch(), 1, 0);
    too_many["payload"]["variants"] = 9;
    const json invalid = c.request(too_many);
    expect(reply_shape_ok(invalid, "error", "v1") &&
               invalid["payload"].value("code", "") == "invalid_request",
           "oversized variants");

    c.send(gen);
    const auto second = c.receive_frame();
    expect(first && second && *first == *second, "same-seed byte identity");
    expect(reply_shape_ok(c.request(make_envelope("ping", "p2", json::object())), "pong", "p2"),
           "alive after errors");

    // Concurrent clients, each reply compared byte-for-byte with a serial run.
    const MessageHandler reference(GeneratorKind::kTubes);
    std::atomic<int> bad{0};
    std::vector<std::thread> clients;
    for (int k = 0; k < kConcurrentClients; ++k)
      clients.emplace_back([&, k] {
        try {
          testing::FrameClient cc(server.port());
          for (int i = 0; i < 5; ++i) {
            const std::string id = "c" + std::to_string(k) + "-" + std::to_string(i);
            const json env = i % 2 == 0
                                 ? testing::generate_envelope(id, testing::chair_sketch(), 2, k * 100 + i)
                                 : make_envelope("ping", id, {{"client", k}});
            cc.send(env);
            const auto reply = cc.receive_frame();
            if (!reply || *reply != reference.handle(env.dump())) ++bad;
          }
        } catch (const std::exception&) {
          ++bad;
        }
      });
    for (auto& t : clients) t.join();
    expect(bad.load() == 0, strf("%d concurrent replies wrong", bad.load()));
    testing::FrameClient after(server.port());
    expect(reply_shape_ok(after.request(make_envelope("ping", "end", json::object())), "pong", "end"),
           "alive after concurrency");
  } catch (const std::exception& e) {
    problems.push_back(std::string("exception: ") + e.what());
  }
  server.stop();
  runner.join();

  std::string detail = "ping, generate, malformed, variants=9, byte identity, " +
                       std::to_string(kConcurrentClients) + " clients";
  if (!problems.empty()) {
    detail += "; failed:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  return {problems.empty(), detail};
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

Outcome serialization(Clock::time_point suite_start) {
  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };

  // OBJ: text -> mesh -> text is exact; meshes whose coordinates carry at
  // most nine significant digits survive mesh -> text -> mesh exactly.
  GenerateRequest req;
  req.encoding = encode_sketch(testing::chair_sketch());
  req.variants = 2;
  req.seed = 3;
  for (const Mesh& m : generate(req).meshes) {
    const std::string text = export_obj(m);
    expect(export_obj(import_obj(text)) == text, "OBJ text round trip");
    expect(export_obj(m) == text, "OBJ double export");
  }
  const Scene shop = testing::coffee_shop();
  for (const auto& o : shop.objects())
    expect(import_obj(export_obj(o.mesh)) == o.mesh, "OBJ mesh round trip " + o.id);

  // JSON: full double precision, so object -> text -> object is exact.
  for (int seed = 1; seed <= 3; ++seed) {
    const Scene scene = testing::distorted(testing::coffee_shop(), 0.37, 1.13, seed);
    const std::string text = save_scene(scene);
    const Scene back = load_scene(text).scene;
    expect(back == scene, "scene JSON round trip");
    expect(save_scene(back) == text && save_scene(scene) == text, "scene double export");
  }
  for (const Sketch& sk : {testing::chair_sketch(), testing::planar_sketch(), testing::one_stroke_sketch()}) {
    const std::string text = save_sketch(sk);
    expect(load_sketch(text) == sk, "sketch JSON round trip");
    expect(save_sketch(load_sketch(text)) == text, "sketch double export");
  }

  // Reports from the CLI on the fixture files, validated against the schema.
  const std::string python = HOLME_PYTHON;
  if (python.empty()) {
    problems.push_back("no Python interpreter to validate reports");
  } else {
    const std::string cmd = "\"" + python + "\" \"" HOLME_SCHEMA_CHECK "\" \"" HOLME_CLI_PATH
                            "\" \"" HOLME_FIXTURE_DIR "\" \"" HOLME_REPORT_SCHEMA "\" > /dev/null";
    expect(run_command(cmd) == 0, "eval reports schema-valid");
  }

  // The unit suite, timed together with this run.
  const int unit = run_command("\"" HOLME_UNIT_TESTS "\" --gtest_brief=1 > /dev/null 2>&1");
  expect(unit == 0, "unit suite exit " + std::to_string(unit));
  const double total = seconds_since(suite_start);
  expect(total < kSuiteBudgetSeconds, strf("suite took %.1f s", total));

  std::string detail = strf("OBJ/JSON round trips, double export, report schema; unit suite + "
                            "acceptance %.1f s",
                            total);
  if (!problems.empty()) {
    detail += "; failed:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  return {problems.empty(), detail};
}

}  // namespace
}  // namespace holme

int main() {
  using namespace holme;
  const auto start = Clock::now();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"matching oracle", matching_oracle},
      {"identity evaluation", identity_evaluation},
      {"synthetic distortion monotonicity", distortion_monotonicity},
      {"metric invariance", metric_invariance},
      {"RDP oracle", rdp_oracle},
      {"homography", homography},
      {"geometry watertightness", watertightness},
      {"protocol conformance", protocol_conformance},
      {"serialization", [&] { return serialization(start); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed;
}
