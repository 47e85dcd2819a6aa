// scribble/tests/synth_oracle_test.cc

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

#include <cmath>
#include <stdexcept>

#include "scribble/reconstruction.h"
#include "scribble/synth_oracle.h"
#include "test_util.h"

using namespace scribble;

namespace {

bool SameScene(const SyntheticScene& a, const SyntheticScene& b) {
  if (a.image_id != b.image_id || a.width != b.width || a.height != b.height ||
      a.instances.size() != b.instances.size())
    return false;
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    const auto& x = a.instances[i];
    const auto& y = b.instances[i];
    if (x.kind != y.kind || !(x.gt_polygon == y.gt_polygon) ||
        x.centerline.points() != y.centerline.points() || x.char_boxes != y.char_boxes ||
        x.height != y.height || x.difficult != y.difficult || x.transcript != y.transcript)
      return false;
  }
  return true;
}

std::vector<Polyline> RegularCenterlines(const SyntheticScene& scene) {
  std::vector<Polyline> out;
  for (const auto& inst : scene.instances)
    if (!inst.difficult) out.push_back(inst.centerline);
  return out;
}

}  // namespace

TEST_CASE("scene generation") {
  CHECK(SameScene(GenerateScene(42, 6), GenerateScene(42, 6)));
  CHECK_FALSE(SameScene(GenerateScene(42, 6), GenerateScene(43, 6)));
  CHECK_THROWS_AS(GenerateScene(1, 0), std::invalid_argument);
  CHECK_THROWS(GenerateScene(1, 20, {}, 60, 60));

  ShapeMix flat;
  flat.oriented = 0;
  flat.curved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (const auto& inst : GenerateScene(seed, 5, flat).instances) {
      CHECK(inst.kind == ShapeKind::kHorizontal);
      CHECK(inst.centerline.points().size() == 2);
    }

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SyntheticScene scene = GenerateScene(seed, 5);
    CHECK(scene.instances.size() == 5);
    for (std::size_t i = 0; i < scene.instances.size(); ++i) {
      const auto& inst = scene.instances[i];
      CHECK(inst.char_boxes.size() == inst.transcript.size());
      CHECK(inst.char_boxes.size() >= 3);
      if (inst.kind == ShapeKind::kCurved) {
        CHECK(inst.centerline.points().size() >= 4);
        CHECK(inst.char_boxes.size() >= 4);
      }
      for (std::size_t k = 0; k < inst.char_boxes.size(); ++k) {
        const CharBox& c = inst.char_boxes[k];
        CHECK(c.score == 1.0);
        CHECK(c.cls.IsCharacter());
        CHECK(c.cls.symbol() == inst.transcript[k]);
        // Char centers sit on the centerline path.
        const Point2D center = c.box.Center();
        double best = 1e300;
        const auto& pts = inst.centerline.points();
        for (std::size_t j = 0; j + 1 < pts.size(); ++j)
          best = std::min(best, testing::SegDist2(center, pts[j], pts[j + 1]));
        CHECK(std::sqrt(best) <= kScribbleThickness / 2 + 1e-6);
        CHECK(c.box.x1 >= 0);
        CHECK(c.box.y1 >= 0);
        CHECK(c.box.x2 <= scene.width);
        CHECK(c.box.y2 <= scene.height);
      }
      for (const Point2D& p : inst.centerline.points())
        CHECK(testing::PointInRing(p, inst.gt_polygon.vertices()));
      for (std::size_t j = i + 1; j < scene.instances.size(); ++j)
        CHECK(PolygonIntersectionArea(inst.gt_polygon, scene.instances[j].gt_polygon) == 0.0);
    }
  }
}

TEST_CASE("ideal outputs") {
  CHECK_THROWS_AS(MakeIdealOutputs(SyntheticScene{"empty", 10, 10, {}}), std::invalid_argument);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SyntheticScene scene = GenerateScene(seed, 5);
    const IdealOutputs ideal = MakeIdealOutputs(scene);
    std::vector<CharBox> regular;
    int n_regular = 0;
    for (const auto& inst : scene.instances) {
      if (inst.difficult) continue;
      ++n_regular;
      regular.insert(regular.end(), inst.char_boxes.begin(), inst.char_boxes.end());
    }
    CHECK(GeneratePseudoLabels(ideal.detections, RegularCenterlines(scene), 0.9).labels == regular);
    CHECK(ExtractTextLines(ideal.map, 0.2).size() == static_cast<std::size_t>(n_regular));
    CHECK(ideal.gts.size() == scene.instances.size());
    CHECK(ideal.annotation.instances.size() == scene.instances.size());
    CHECK(ideal.annotation.image_id == scene.image_id);
    CHECK(Validate(ideal.annotation).empty());

    // The map is exactly the union of thickness-5 centerline strokes.
    std::vector<bool> expect(static_cast<std::size_t>(scene.width) * scene.height, false);
    for (const auto& inst : scene.instances) {
      if (inst.difficult) continue;
      const auto s = testing::BruteStroke(inst.centerline.points(), kScribbleThickness,
                                          scene.width, scene.height);
      for (std::size_t i = 0; i < s.size(); ++i) expect[i] = expect[i] || s[i];
    }
    bool same = true;
    for (std::size_t i = 0; i < expect.size(); ++i)
      same = same && ideal.map.values()[i] == (expect[i] ? 1.0 : 0.0);
    CHECK(same);
  }
}

TEST_CASE("detector simulation") {
  const SyntheticScene scene = GenerateScene(9, 5);
  const IdealOutputs ideal = MakeIdealOutputs(scene);
  const DetectorOutputs clean = SimulateDetector(scene, {});
  CHECK(clean.detections == ideal.detections);
  CHECK(clean.map == ideal.map);

  const NoiseConfig noisy{0.3, 0.1, 4, 0.5, 2, 77};
  const DetectorOutputs a = SimulateDetector(scene, noisy);
  const DetectorOutputs b = SimulateDetector(scene, noisy);
  CHECK(a.detections == b.detections);
  CHECK(a.map == b.map);
  for (double v : a.map.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (const CharBox& c : a.detections) {
    CHECK(c.score >= 0.5);
    CHECK(c.score <= 1.0);
  }

  NoiseConfig all_gone;
  all_gone.drop_prob = 1.0;
  CHECK(SimulateDetector(scene, all_gone).detections.empty());

  NoiseConfig bad;
  bad.drop_prob = 1.5;
  CHECK_THROWS_AS(SimulateDetector(scene, bad), std::invalid_argument);
  bad = {};
  bad.jitter_frac = -0.1;
  CHECK_THROWS_AS(SimulateDetector(scene, bad), std::invalid_argument);
}

TEST_CASE("empirical drop rate") {
  std::size_t total = 0, kept = 0;
  NoiseConfig noise;
  noise.drop_prob = 0.3;
  for (std::uint64_t seed = 0; total < 10000; ++seed) {
    const SyntheticScene scene = GenerateScene(seed, 8);
    noise.seed = seed;
    for (const auto& inst : scene.instances) total += inst.char_boxes.size();
    kept += SimulateDetector(scene, noise).detections.size();
  }
  const double rate = 1.0 - static_cast<double>(kept) / total;
  MESSAGE("characters=" << total << " drop rate=" << rate);
  CHECK(std::abs(rate - 0.3) <= 0.02);
}

TEST_CASE("spurious boxes stay off the centerlines") {
  NoiseConfig noise;
  noise.spurious_per_image = 15;
  int spurious = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SyntheticScene scene = GenerateScene(seed, 5);
    noise.seed = seed;
    const DetectorOutputs out = SimulateDetector(scene, noise);
    std::vector<Polyline> lines;
    for (const auto& inst : scene.instances) lines.push_back(inst.centerline);
    for (const CharBox& c : out.detections) {
      if (c.cls.kind() != CharClass::Kind::kUnknown) continue;
      ++spurious;
      for (const auto& inst : scene.instances)
        CHECK_FALSE(testing::PolylineTouchesBox(inst.centerline.points(), c.box));
    }
    // The pseudo-label filter removes all of them on ideal scribbles.
    for (const CharBox& c : GeneratePseudoLabels(out.detections, lines, 0.9).labels)
      CHECK(c.cls.IsCharacter());
  }
  CHECK(spurious > 300);
}
