// scribble/tests/io_test.cc

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

#include <bit>
#include <cstring>
#include <filesystem>

#include "scribble/io.h"
#include "scribble/synth_oracle.h"
#include "test_util.h"

using namespace scribble;
using scribble::testing::TestRng;

namespace {

std::vector<Point2D> RandomPoints(TestRng& rng, int lo, int hi) {
  std::vector<Point2D> pts;
  for (int i = rng.Int(lo, hi); i > 0; --i)
    pts.push_back({rng.Uniform(0, 640), rng.Uniform(0, 480)});
  return pts;
}

CharClass AnyClass(TestRng& rng) {
  switch (rng.Int(0, 4)) {
    case 0: return CharClass::Background();
    case 1: return CharClass::Unknown();
    case 2: return CharClass::Foreground();
    case 3: return CharClass::Digit(rng.Int(0, 9));
    default: return CharClass::Letter(static_cast<char>('a' + rng.Int(0, 25)));
  }
}

// Little-endian TLM1 bytes assembled by hand.
std::string HandTlm(std::uint32_t w, std::uint32_t h, const std::vector<float>& values) {
  std::string out = "TLM1";
  auto put = [&](std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out += static_cast<char>((v >> (8 * k)) & 0xff);
  };
  put(w);
  put(h);
  for (float f : values) put(std::bit_cast<std::uint32_t>(f));
  return out;
}

}  // namespace

TEST_CASE("annotation file") {
  const std::string text =
      R"({"version":"1.0","image":{"id":"img_1","width":64,"height":48},"instances":[)"
      R"({"id":3,"points":[[1.5,2.0],[30.25,4.0]],"difficult":false,"transcript":"hi","label_time_ms":1200},)"
      R"({"id":4,"points":[[40.0,10.0],[60.0,10.0],[60.0,30.0],[40.0,30.0]],"difficult":true}]})";
  const ImageAnnotation a = AnnotationFromJson(text);
  CHECK(a.image_id == "img_1");
  CHECK(a.width == 64);
  CHECK(a.height == 48);
  REQUIRE(a.instances.size() == 2);
  CHECK(a.instances[0].id == 3);
  CHECK(a.instances[0].points[1] == Point2D{30.25, 4.0});
  CHECK(a.instances[0].transcript == "hi");
  CHECK(a.instances[0].label_time_ms == 1200);
  CHECK(a.instances[1].difficult);
  CHECK_FALSE(a.instances[1].transcript.has_value());
  CHECK(AnnotationFromJson(AnnotationToJson(a)) == a);

  CHECK_THROWS_AS(AnnotationFromJson("{"), FormatError);
  CHECK_THROWS_AS(AnnotationFromJson(R"({"version":"2.0","image":{"id":"x","width":1,"height":1},"instances":[]})"),
                  FormatError);
  CHECK_THROWS_AS(AnnotationFromJson(R"({"version":"1.0","image":{"id":"x","width":1},"instances":[]})"),
                  FormatError);
  CHECK_THROWS_AS(AnnotationFromJson(R"({"version":"1.0","image":{"id":"x","width":1,"height":1},"instances":[{"id":1,"points":[[1]],"difficult":false}]})"),
                  FormatError);

  TestRng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    ImageAnnotation r{"im_" + std::to_string(trial), rng.Int(1, 2000), rng.Int(1, 2000), {}};
    for (int i = rng.Int(0, 6); i > 0; --i) {
      ScribbleInstance s;
      s.id = rng.Int(-5, 1000000);
      s.difficult = rng.Coin(0.2);
      s.points = RandomPoints(rng, s.difficult ? 3 : 2, 9);
      if (rng.Coin()) s.transcript = "w" + std::to_string(rng.Int(0, 999));
      if (rng.Coin()) s.label_time_ms = rng.Int(0, 100000);
      r.instances.push_back(std::move(s));
    }
    const std::string first = AnnotationToJson(r);
    const ImageAnnotation back = AnnotationFromJson(first);
    CHECK(back == r);
    CHECK(AnnotationToJson(back) == first);
    CHECK(Validate(back) == Validate(r));
  }
}

TEST_CASE("detections file") {
  const std::string text =
      R"({"image_id":"a","chars":[{"box":[1.0,2.0,3.0,4.0],"score":0.5,"class":"k"},)"
      R"({"box":[5.0,5.0,9.0,9.0],"score":1.0,"class":"Unknown"}],"textline_map":"maps/a.tlm"})";
  const DetectionsFile d = DetectionsFromJson(text);
  CHECK(d.image_id == "a");
  REQUIRE(d.chars.size() == 2);
  CHECK(d.chars[0].cls == CharClass::Letter('k'));
  CHECK(d.chars[1].cls == CharClass::Unknown());
  CHECK(d.textline_map == "maps/a.tlm");
  CHECK_THROWS_AS(DetectionsFromJson(R"({"image_id":"a","chars":[{"box":[3,2,1,4],"score":0.5,"class":"k"}]})"),
                  FormatError);
  CHECK_THROWS_AS(DetectionsFromJson(R"({"image_id":"a","chars":[{"box":[1,2,3,4],"score":1.5,"class":"k"}]})"),
                  FormatError);
  CHECK_THROWS_AS(DetectionsFromJson(R"({"image_id":"a","chars":[{"box":[1,2,3,4],"score":0.5,"class":"K"}]})"),
                  FormatError);

  TestRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    DetectionsFile f{"d" + std::to_string(trial), {}, std::nullopt};
    if (rng.Coin()) f.textline_map = "maps/" + f.image_id + ".tlm";
    for (int i = rng.Int(0, 20); i > 0; --i) {
      const double x = rng.Uniform(0, 600), y = rng.Uniform(0, 400);
      f.chars.push_back({{x, y, x + rng.Uniform(0.5, 40), y + rng.Uniform(0.5, 40)},
                         rng.Uniform(0, 1), AnyClass(rng)});
    }
    const std::string first = DetectionsToJson(f);
    const DetectionsFile back = DetectionsFromJson(first);
    CHECK(back.chars == f.chars);
    CHECK(back.textline_map == f.textline_map);
    CHECK(DetectionsToJson(back) == first);
  }
}

TEST_CASE("ground truth and results files") {
  TestRng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    GroundTruthFile g{"g" + std::to_string(trial), {}};
    ResultsFile r{g.image_id, {}};
    for (int i = rng.Int(0, 5); i > 0; --i) {
      auto ring = testing::ConvexHull(RandomPoints(rng, 3, 12));
      if (ring.size() < 3) continue;
      g.instances.push_back({Polygon(ring), rng.Coin(0.3)});
      DetectionResult d{Polygon(ring), static_cast<int>(r.detections.size()), std::nullopt,
                        rng.Int(1, 9)};
      if (rng.Coin()) d.transcript = "t" + std::to_string(rng.Int(0, 99));
      r.detections.push_back(std::move(d));
    }
    const std::string gt_text = GroundTruthToJson(g);
    const GroundTruthFile gb = GroundTruthFromJson(gt_text);
    REQUIRE(gb.instances.size() == g.instances.size());
    for (std::size_t i = 0; i < g.instances.size(); ++i) {
      CHECK(gb.instances[i].polygon == g.instances[i].polygon);
      CHECK(gb.instances[i].difficult == g.instances[i].difficult);
    }
    CHECK(GroundTruthToJson(gb) == gt_text);

    const std::string res_text = ResultsToJson(r);
    const ResultsFile rb = ResultsFromJson(res_text);
    REQUIRE(rb.detections.size() == r.detections.size());
    for (std::size_t i = 0; i < r.detections.size(); ++i) {
      CHECK(rb.detections[i].boundary == r.detections[i].boundary);
      CHECK(rb.detections[i].transcript == r.detections[i].transcript);
      CHECK(rb.detections[i].char_count == r.detections[i].char_count);
      CHECK(rb.detections[i].region_id == static_cast<int>(i));
    }
    CHECK(ResultsToJson(rb) == res_text);
  }
  CHECK_THROWS_AS(GroundTruthFromJson(R"({"image_id":"x","instances":[{"polygon":[[0,0],[1,1]],"difficult":false}]})"),
                  FormatError);
}

TEST_CASE("report file") {
  const EvalReport r = Summarize({3, 4, 5});
  const std::string text = ReportToJson(r);
  const EvalReport back = ReportFromJson(text);
  CHECK(back.precision == r.precision);
  CHECK(back.recall == r.recall);
  CHECK(back.f_measure == r.f_measure);
  CHECK(back.matched == 3);
  CHECK(back.num_dets == 4);
  CHECK(back.num_gts == 5);
  CHECK(ReportToJson(back) == text);
}

TEST_CASE("text-line map") {
  const std::string hand = HandTlm(3, 2, {0.0f, 0.25f, 1.0f, 0.5f, 0.75f, 0.125f});
  const RasterGrid m = DecodeTextLineMap(hand);
  CHECK(m.width() == 3);
  CHECK(m.height() == 2);
  CHECK(m.at(1, 0) == 0.25);
  CHECK(m.at(0, 1) == 0.5);
  CHECK(EncodeTextLineMap(m) == hand);

  CHECK_THROWS_AS(DecodeTextLineMap("TLM2" + hand.substr(4)), FormatError);
  CHECK_THROWS_AS(DecodeTextLineMap(hand.substr(0, hand.size() - 1)), FormatError);
  CHECK_THROWS_AS(DecodeTextLineMap(HandTlm(1, 1, {1.5f})), FormatError);
  CHECK_THROWS_AS(DecodeTextLineMap(HandTlm(0, 1, {})), FormatError);

  TestRng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = rng.Int(1, 64), h = rng.Int(1, 64);
    std::vector<float> vals(static_cast<std::size_t>(w) * h);
    for (float& v : vals) v = static_cast<float>(rng.Uniform(0, 1));
    const std::string bytes = HandTlm(w, h, vals);
    const RasterGrid g = DecodeTextLineMap(bytes);
    CHECK(EncodeTextLineMap(g) == bytes);
    CHECK(DecodeTextLineMap(EncodeTextLineMap(g)) == g);
  }

  // Synthetic maps survive a trip through disk.
  const auto dir = testing::TempDir("io");
  const IdealOutputs ideal = MakeIdealOutputs(GenerateScene(3, 4));
  WriteFileAtomic(dir / "m.tlm", EncodeTextLineMap(ideal.map));
  CHECK(DecodeTextLineMap(ReadFile(dir / "m.tlm")) == ideal.map);
  WriteFileAtomic(dir / "m.tlm", "replaced");
  CHECK(ReadFile(dir / "m.tlm") == "replaced");
  CHECK_THROWS(ReadFile(dir / "missing"));
  std::filesystem::remove_all(dir);
}
