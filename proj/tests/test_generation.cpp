#include "fixture_scenes.hpp"

#include "holme/errors.hpp"
#include "holme/generation.hpp"
#include "holme/io.hpp"

#include <gtest/gtest.h>

#include <random>

namespace holme {
namespace {

// Twelve line strokes on the edges of a cube of side `s` at local `lo`.
Sketch wire_cube(const Workspace& ws, const Point3& lo, double s) {
  Sketch sk;
  sk.workspace = ws;
  int n = 0;
  for (int a = 0; a < 8; ++a)
    for (int axis = 0; axis < 3; ++axis) {
      if (a & (1 << axis)) continue;
      const int b = a | (1 << axis);
      auto corner = [&](int c) {
        return Point3(lo + s * Point3(c & 1, (c >> 1) & 1, (c >> 2) & 1));
      };
      Stroke st;
      st.id = "e" + std::to_string(n);
      st.mode = StrokeMode::kLine;
      st.points = {ws.to_world(corner(a)), ws.to_world(corner(b))};
      st.timestamps = {n * 1.0, n * 1.0 + 0.5};
      ++n;
      sk.strokes.push_back(st);
    }
  return sk;
}

GenerateRequest request_for(const Sketch& sk, GeneratorKind kind, int variants, std::uint64_t seed) {
  GenerateRequest r;
  r.request_id = "t";
  r.encoding = encode_sketch(sk);
  r.generator = kind;
  r.variants = variants;
  r.seed = seed;
  return r;
}

TEST(Encode, OriginCornerMapsToZero) {
  const Workspace ws = workspace_from_corners({0.2, 1.0, 0.3}, {0.6, 1.0, 0.0}, 0.5);
  Sketch sk;
  sk.workspace = ws;
  sk.strokes.push_back({"a", StrokeMode::kLine, {ws.origin, ws.to_world({0.1, 0.1, 0.1})}, {3.0, 3.5}, {}});
  const SketchEncoding e = encode_sketch(sk);
  EXPECT_NEAR(e.strokes[0].points[0].norm(), 0.0, 1e-12);
  EXPECT_EQ(e.strokes[0].timestamps, (std::vector<double>{0.0, 0.5}));
}

TEST(Encode, IndependentOfWorkspacePose) {
  const Sketch a = testing::chair_sketch();
  Sketch b = a;
  b.workspace = workspace_from_corners({3, 0.2, -1}, {3.1, 0.2, -1.5}, 0.5);
  for (auto& s : b.strokes)
    for (auto& p : s.points) p = b.workspace.to_world(a.workspace.to_local(p));
  const SketchEncoding ea = encode_sketch(a), eb = encode_sketch(b);
  ASSERT_EQ(ea.strokes.size(), eb.strokes.size());
  for (std::size_t i = 0; i < ea.strokes.size(); ++i)
    for (std::size_t k = 0; k < ea.strokes[i].points.size(); ++k)
      EXPECT_NEAR((ea.strokes[i].points[k] - eb.strokes[i].points[k]).norm(), 0.0, 1e-12);
}

TEST(Encode, OrderPreservedAndEmptyRejected) {
  const Sketch sk = testing::chair_sketch();
  const SketchEncoding e = encode_sketch(sk);
  ASSERT_EQ(e.strokes.size(), sk.strokes.size());
  for (std::size_t i = 0; i < e.strokes.size(); ++i)
    EXPECT_TRUE(e.strokes[i].points[0].isApprox(sk.workspace.to_local(sk.strokes[i].points[0]), 1e-12));
  try {
    encode_sketch(Sketch{});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kEmptySketch);
  }
}

TEST(Generate, HullOfWireCubeIsTheCube) {
  const Workspace ws = workspace_from_corners({0, 1, 0}, {0.3, 1, -0.4}, 0.5);
  const Sketch sk = wire_cube(ws, {0.1, 0.05, 0.12}, 0.3);
  const auto req = request_for(sk, GeneratorKind::kHull, 1, 0);
  const GenerateResponse r = generate(req);
  ASSERT_EQ(r.meshes.size(), 1u);
  EXPECT_EQ(r.meshes[0].triangles.size(), 12u);
  const AABB got = compute_aabb(r.meshes[0]);
  const AABB want = encoding_bounds(req.encoding);
  EXPECT_NEAR((got.min - want.min).norm(), 0.0, 1e-6);
  EXPECT_NEAR((got.max - want.max).norm(), 0.0, 1e-6);
}

TEST(Generate, DeterministicAndCentered) {
  const Sketch sk = testing::chair_sketch();
  for (auto kind : {GeneratorKind::kTubes, GeneratorKind::kHull}) {
    const auto req = request_for(sk, kind, 4, 0xDEADBEEFCAFEULL);
    const GenerateResponse a = generate(req), b = generate(req);
    ASSERT_EQ(a.meshes.size(), 4u);
    EXPECT_EQ(response_to_payload(a).dump(), response_to_payload(b).dump());
    const AABB bounds = encoding_bounds(req.encoding);
    for (std::size_t k = 0; k < a.meshes.size(); ++k) {
      EXPECT_FALSE(a.meshes[k].empty());
      EXPECT_NEAR((compute_aabb(a.meshes[k]).center() - bounds.center()).norm(), 0.0, 1e-6);
      for (std::size_t j = 0; j < k; ++j) EXPECT_NE(a.meshes[k].vertices, a.meshes[j].vertices);
    }
  }
}

TEST(Generate, VariantZeroIsUnjittered) {
  const Sketch sk = testing::chair_sketch();
  const auto one = generate(request_for(sk, GeneratorKind::kTubes, 1, 1));
  const auto other = generate(request_for(sk, GeneratorKind::kTubes, 3, 987654321));
  EXPECT_EQ(one.meshes[0], other.meshes[0]);
  const auto reseeded = generate(request_for(sk, GeneratorKind::kTubes, 3, 5));
  EXPECT_NE(reseeded.meshes[1].vertices, other.meshes[1].vertices);
}

TEST(Generate, JitterBounded) {
  Mesh m = box_mesh({0, 0, 0}, {1, 1, 1});
  const Mesh before = m;
  apply_jitter(m, 42, 3, 0.01);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const double d = (m.vertices[i] - before.vertices[i]).norm();
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, 0.01);
  }
  Mesh again = before;
  apply_jitter(again, 42, 3, 0.01);
  EXPECT_EQ(again, m);
  Mesh other = before;
  apply_jitter(other, 42, 4, 0.01);
  EXPECT_NE(other, m);
}

TEST(Generate, TubesScaleWithExtent) {
  const Sketch sk = testing::one_stroke_sketch();
  const auto req = request_for(sk, GeneratorKind::kTubes, 1, 0);
  const Mesh raw = generator_for(GeneratorKind::kTubes).build(req.encoding);
  EXPECT_EQ(raw.vertices.size(), 5u * kTubeSides + 2);
  EXPECT_TRUE(is_watertight(raw));
}

TEST(Generate, FailuresAreTyped) {
  auto code_of = [](const GenerateRequest& r) {
    try {
      generate(r);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of(request_for(testing::planar_sketch(), GeneratorKind::kHull, 1, 0)),
            ErrorCode::kGenerationFailed);
  EXPECT_NO_THROW(generate(request_for(testing::planar_sketch(), GeneratorKind::kTubes, 1, 0)));
  auto too_many = request_for(testing::chair_sketch(), GeneratorKind::kTubes, 1, 0);
  too_many.variants = 9;
  EXPECT_EQ(code_of(too_many), ErrorCode::kInvalidArgument);
}

TEST(Payload, RequestRoundTrip) {
  const auto req = request_for(testing::chair_sketch(), GeneratorKind::kHull, 5, 18446744073709551615ULL);
  const auto back = request_from_payload(request_to_payload(req), "t", GeneratorKind::kTubes);
  EXPECT_EQ(back.encoding, req.encoding);
  EXPECT_EQ(back.generator, GeneratorKind::kHull);
  EXPECT_EQ(back.variants, 5);
  EXPECT_EQ(back.seed, req.seed);
}

TEST(Payload, DefaultsAndSchemaPaths) {
  nlohmann::json p = request_to_payload(request_for(testing::one_stroke_sketch(), GeneratorKind::kTubes, 2, 3));
  p.erase("generator");
  p.erase("variants");
  p["seed"] = "12345678901234567890";
  const auto r = request_from_payload(p, "x", GeneratorKind::kHull);
  EXPECT_EQ(r.generator, GeneratorKind::kHull);
  EXPECT_EQ(r.variants, 1);
  EXPECT_EQ(r.seed, 12345678901234567890ULL);

  auto path_of = [](const nlohmann::json& payload) -> std::string {
    try {
      request_from_payload(payload, "x", GeneratorKind::kTubes);
    } catch (const SchemaError& e) {
      return e.path();
    }
    return "";
  };
  nlohmann::json bad = p;
  bad["variants"] = 0;
  EXPECT_EQ(path_of(bad), "payload.variants");
  bad = p;
  bad["strokes"][0]["points"][1] = "nope";
  EXPECT_EQ(path_of(bad), "payload.strokes[0].points[1]");
  bad = p;
  bad["generator"] = "diffusion";
  EXPECT_EQ(path_of(bad), "payload.generator");
  bad = p;
  bad["seed"] = -4;
  EXPECT_EQ(path_of(bad), "payload.seed");
  bad = p;
  bad.erase("strokes");
  EXPECT_EQ(path_of(bad), "payload.strokes");
}

TEST(Payload, ResponseRoundTrip) {
  const auto resp = generate(request_for(testing::chair_sketch(), GeneratorKind::kTubes, 2, 9));
  const auto back = response_from_payload(response_to_payload(resp), "t");
  EXPECT_EQ(back.meshes, resp.meshes);
}

}  // namespace
}  // namespace holme
