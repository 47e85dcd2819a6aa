// scribble/tests/annotation_test.cc

// Copyright 2026  The scribbletext Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scribble/annotation.h"
#include "scribble/synth_oracle.h"
#include "test_util.h"

using namespace scribble;
using scribble::testing::TestRng;

namespace {

ImageAnnotation Image(std::vector<ScribbleInstance> instances, int w = 200, int h = 100) {
  return ImageAnnotation{"img", w, h, std::move(instances)};
}

ScribbleInstance Inst(std::int64_t id, std::vector<Point2D> pts, bool difficult = false) {
  ScribbleInstance s;
  s.id = id;
  s.points = std::move(pts);
  s.difficult = difficult;
  return s;
}

std::vector<std::string> Rules(const std::vector<Violation>& v) {
  std::vector<std::string> out;
  for (const Violation& x : v) out.push_back(x.rule);
  return out;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(Validate(Image({Inst(1, {{10, 50}, {90, 50}})})).empty());

  const auto one_point = Validate(Image({Inst(1, {{10, 50}})}));
  REQUIRE(one_point.size() == 1);
  CHECK(one_point[0].rule == kRuleMinPoints);
  CHECK(one_point[0].instance_id == 1);

  const auto oob = Validate(Image({Inst(4, {{10, 50}, {203, 50}})}));
  REQUIRE(oob.size() == 1);
  CHECK(oob[0].rule == kRuleOutOfBounds);
  CHECK(oob[0].instance_id == 4);

  // Bounds are inclusive.
  CHECK(Validate(Image({Inst(1, {{0, 0}, {200, 100}})})).empty());

  CHECK(Rules(Validate(Image({Inst(1, {{5, 5}, {5, 5}})}))) ==
        std::vector<std::string>{kRuleZeroLength});
  CHECK(Rules(Validate(Image({Inst(1, {{5, 5}, {NAN, 5}})}))) ==
        std::vector<std::string>{kRuleNonFinite});
  CHECK(Rules(Validate(Image({Inst(1, {{5, 5}, {9, 5}}), Inst(1, {{5, 8}, {9, 8}})}))) ==
        std::vector<std::string>{kRuleDuplicateId});

  ScribbleInstance timed = Inst(2, {{5, 5}, {9, 5}});
  timed.label_time_ms = -1;
  CHECK(Rules(Validate(Image({timed}))) == std::vector<std::string>{kRuleNegativeTime});

  const auto bad_size = Validate(Image({}, 0, 10));
  REQUIRE(bad_size.size() == 1);
  CHECK(bad_size[0].rule == kRuleImageSize);
  CHECK_FALSE(bad_size[0].instance_id.has_value());

  // Difficult instances keep their polygon and need only one point.
  CHECK(Validate(Image({Inst(1, {{5, 5}}, true)})).empty());
  CHECK(Validate(Image({Inst(1, {{5, 5}, {20, 5}, {20, 15}, {5, 15}}, true)})).empty());
  CHECK(Rules(Validate(Image({Inst(1, {}, true)}))) == std::vector<std::string>{kRuleMinPoints});
}

TEST_CASE("derive scribble") {
  const Polyline a = DeriveScribble(Polygon({{0, 0}, {100, 0}, {100, 20}, {0, 20}}), 2);
  REQUIRE(a.points().size() == 2);
  CHECK(a.points()[0].x == doctest::Approx(25));
  CHECK(a.points()[0].y == doctest::Approx(10));
  CHECK(a.points()[1].x == doctest::Approx(75));
  CHECK(a.points()[1].y == doctest::Approx(10));

  const Polyline s = DeriveScribble(Polygon({{0, 0}, {20, 0}, {20, 20}, {0, 20}}), 2);
  CHECK(s.points()[0].x == doctest::Approx(5));
  CHECK(s.points()[0].y == doctest::Approx(10));
  CHECK(s.points()[1].x == doctest::Approx(15));
  CHECK(s.points()[1].y == doctest::Approx(10));

  // Vertical-ish rectangle keeps the long axis.
  const Polyline v = DeriveScribble(Polygon({{0, 0}, {20, 0}, {20, 100}, {0, 100}}), 2);
  CHECK(v.points()[0].x == doctest::Approx(10));
  CHECK(std::abs(v.points()[1].y - v.points()[0].y) == doctest::Approx(50));

  CHECK_THROWS_AS(DeriveScribble(Polygon({{0, 0}, {10, 0}, {10, 5}, {0, 5}}), 1),
                  std::invalid_argument);
  // U-shape read as a band: inner arm paired with the outer rim, so the
  // midpoints fall in the hollow.
  const Polygon u({{0, 0}, {10, 0}, {10, 80}, {90, 80}, {90, 0}, {100, 0}, {100, 100}, {0, 100}});
  CHECK_THROWS_AS(DeriveScribble(u, 5), std::runtime_error);

  ShapeMix curved;
  curved.horizontal = 0;
  curved.oriented = 0;
  curved.difficult_prob = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SyntheticScene scene = GenerateScene(seed, 4, curved);
    for (const SyntheticInstance& inst : scene.instances) {
      for (int n : {2, 3, 5, 8}) {
        const Polyline line = DeriveScribble(inst.gt_polygon, n);
        CHECK(line.points().size() == static_cast<std::size_t>(n));
        for (const Point2D& p : line.points())
          CHECK(testing::PointInRing(p, inst.gt_polygon.vertices()));
      }
    }
  }
}

TEST_CASE("instance height") {
  CHECK(InstanceHeight(Polygon({{0, 0}, {100, 0}, {100, 20}, {0, 20}})) == doctest::Approx(20));
  CHECK(InstanceHeight(Polygon({{0, 0}, {30, 0}, {30, 30}, {0, 30}})) == doctest::Approx(30));
}

TEST_CASE("perturb") {
  ImageAnnotation base = Image({Inst(7, {{50, 40}, {120, 45}, {150, 60}}),
                                Inst(8, {{10, 10}, {20, 10}, {20, 20}}, true)});
  const std::map<std::int64_t, double> h50 = {{7, 50.0}};

  CHECK(Perturb(base, 0.0, h50, 3) == base);
  CHECK_THROWS_AS(Perturb(base, 0.0, {}, 3), std::invalid_argument);
  CHECK_THROWS_AS(Perturb(base, 0.1, {}, 3), std::invalid_argument);
  CHECK_THROWS_AS(Perturb(base, -0.1, h50, 3), std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ImageAnnotation p = Perturb(base, 0.4, h50, seed);
    CHECK(p.instances[1] == base.instances[1]);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(p.instances[0].points[i].x - base.instances[0].points[i].x) <= 10.0);
      CHECK(std::abs(p.instances[0].points[i].y - base.instances[0].points[i].y) <= 10.0);
    }
    CHECK(Validate(p).empty());
  }

  // Same seed, larger offset: the same pattern scaled.
  const ImageAnnotation small = Perturb(base, 0.1, h50, 9);
  const ImageAnnotation large = Perturb(base, 0.3, h50, 9);
  for (std::size_t i = 0; i < 3; ++i) {
    const double ds = small.instances[0].points[i].x - base.instances[0].points[i].x;
    const double dl = large.instances[0].points[i].x - base.instances[0].points[i].x;
    CHECK(std::abs(ds) <= std::abs(dl));
    CHECK(dl == doctest::Approx(3 * ds).epsilon(1e-9));
  }

  // Deterministic per (seed, image id).
  CHECK(Perturb(base, 0.2, h50, 5) == Perturb(base, 0.2, h50, 5));
  ImageAnnotation renamed = base;
  renamed.image_id = "other";
  CHECK(Perturb(renamed, 0.2, h50, 5).instances[0].points !=
        Perturb(base, 0.2, h50, 5).instances[0].points);

  // Clamped to the image.
  const ImageAnnotation edge = Image({Inst(1, {{0, 0}, {200, 100}})});
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    CHECK(Validate(Perturb(edge, 1.0, {{1, 80.0}}, seed)).empty());
}

TEST_CASE("perturb displacement distribution") {
  // 5000 points, two coordinates each: 10^4 draws from U[-0.05H, 0.05H].
  const double height = 40.0;
  ScribbleInstance inst = Inst(1, {});
  for (int i = 0; i < 5000; ++i) inst.points.push_back({500.0 + i % 100, 500.0 + i / 100});
  const ImageAnnotation base = Image({inst}, 2000, 2000);
  const ImageAnnotation p = Perturb(base, 0.1, {{1, height}}, 12345);
  std::vector<double> dx;
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    dx.push_back(p.instances[0].points[i].x - inst.points[i].x);
    dx.push_back(p.instances[0].points[i].y - inst.points[i].y);
  }
  const double d = testing::KsUniform(dx, -0.05 * height, 0.05 * height);
  // Asymptotic critical value at the 1% level.
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(dx.size())));
}

TEST_CASE("cost metrics") {
  ImageAnnotation a = Image({Inst(1, {{1, 1}, {5, 1}}), Inst(2, {{1, 3}, {5, 3}})});
  ImageAnnotation b = Image({Inst(1, {{1, 1}, {2, 1}, {3, 1}, {4, 1}}),
                             Inst(2, {{1, 1}, {9, 1}, {9, 9}}, true)});
  const std::vector<ImageAnnotation> set = {a, b};
  const CostReport r = ComputeCostMetrics(set);
  CHECK(r.instance_count == 3);
  REQUIRE(r.avg_points_per_instance.has_value());
  CHECK(*r.avg_points_per_instance == doctest::Approx(8.0 / 3.0));
  CHECK_FALSE(r.avg_label_time_ms.has_value());
  CHECK(r.timed_count == 0);

  const CostReport empty = ComputeCostMetrics({});
  CHECK(empty.instance_count == 0);
  CHECK_FALSE(empty.avg_points_per_instance.has_value());

  a.instances[0].label_time_ms = 1000;
  b.instances[1].label_time_ms = 3000;
  const std::vector<ImageAnnotation> timed = {b, a};
  const CostReport t = ComputeCostMetrics(timed);
  CHECK(t.timed_count == 2);
  CHECK(*t.avg_label_time_ms == doctest::Approx(2000.0));
  CHECK(*t.avg_points_per_instance == doctest::Approx(8.0 / 3.0));  // order-free

  // Quadrilateral ground truth converted with two points per instance.
  ImageAnnotation quads = Image({});
  TestRng rng(2);
  for (int i = 0; i < 10; ++i) {
    const double x = rng.Uniform(0, 100), y = rng.Uniform(0, 50);
    const Polygon quad({{x, y}, {x + rng.Uniform(20, 80), y}, {x + 60, y + 20}, {x, y + 25}});
    quads.instances.push_back(Inst(i, DeriveScribble(quad, 2).points()));
  }
  quads.width = 400;
  const std::vector<ImageAnnotation> quad_set = {quads};
  CHECK(*ComputeCostMetrics(quad_set).avg_points_per_instance == 2.0);
}

TEST_CASE("ground truth masks") {
  const ImageAnnotation single = Image({Inst(1, {{10, 20}, {80, 30}})});
  const GroundTruthMasks m = MakeGtMasks(single);
  CHECK(m.target == RasterizePolyline(Polyline({{10, 20}, {80, 30}}), 5.0, 200, 100));
  CHECK(m.ignore.Empty());

  const ImageAnnotation hard = Image({Inst(1, {{10, 10}, {40, 10}, {40, 30}, {10, 30}}, true),
                                      Inst(2, {{100, 50}}, true)});
  const GroundTruthMasks hm = MakeGtMasks(hard);
  CHECK(hm.target.Empty());
  CHECK_FALSE(hm.ignore.Empty());

  CHECK_THROWS_AS(MakeGtMasks(Image({Inst(1, {{10, 10}})})), std::invalid_argument);

  TestRng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    ImageAnnotation mixed = Image({}, 64, 48);
    const int n = rng.Int(1, 5);
    double bound = 0;
    for (int i = 0; i < n; ++i) {
      const bool difficult = rng.Coin(0.3);
      std::vector<Point2D> pts;
      const int k = difficult ? rng.Int(1, 5) : rng.Int(2, 4);
      for (int j = 0; j < k; ++j) pts.push_back({rng.Uniform(0, 64), rng.Uniform(0, 48)});
      if (difficult && k >= 3) pts = testing::ConvexHull(pts);
      if (difficult && k >= 3 && (pts.size() < 3 || testing::ShoelaceArea(pts) < 1)) continue;
      if (!difficult) {
        double len = 0;
        for (int j = 0; j + 1 < k; ++j)
          len += std::hypot(pts[j + 1].x - pts[j].x, pts[j + 1].y - pts[j].y);
        bound += (len + 5) * 5;
      }
      mixed.instances.push_back(Inst(i, pts, difficult));
    }
    const GroundTruthMasks got = MakeGtMasks(mixed);

    std::vector<bool> target(64 * 48, false), ignore(64 * 48, false);
    for (const ScribbleInstance& inst : mixed.instances) {
      if (!inst.difficult) {
        const auto s = testing::BruteStroke(inst.points, 5.0, 64, 48);
        for (std::size_t i = 0; i < s.size(); ++i) target[i] = target[i] || s[i];
      } else if (inst.points.size() >= 3) {
        for (int r = 0; r < 48; ++r)
          for (int c = 0; c < 64; ++c)
            if (testing::PointInRing({c + 0.5, r + 0.5}, inst.points)) ignore[r * 64 + c] = true;
      } else {
        const auto s = testing::BruteStroke(inst.points, 5.0, 64, 48);
        for (std::size_t i = 0; i < s.size(); ++i) ignore[i] = ignore[i] || s[i];
      }
    }
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = target[i] && !ignore[i];
    CHECK(testing::MaskBits(got.target) == target);
    CHECK(testing::MaskBits(got.ignore) == ignore);
    CHECK(static_cast<double>(got.target.Count()) <= bound);
  }
}
