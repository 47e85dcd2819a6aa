// scribble/synth_oracle.cc

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

#include "scribble/synth_oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "random.h"

namespace scribble {

namespace {

constexpr double kMinCharHeight = 16.0;
constexpr double kMaxCharHeight = 32.0;
constexpr double kCanvasMargin = 4.0;
constexpr double kInstanceGap = 10.0;
constexpr int kPlacementAttempts = 2000;
constexpr int kSpuriousAttempts = 200;

// Arc-length parameterized path: straight when curvature == 0, else a
// circular arc. s = 0 is the first character center.
struct Path {
  double angle = 0.0;
  double curvature = 0.0;

  double Heading(double s) const { return angle + curvature * s; }
  Point2D At(double s) const {
    if (curvature == 0.0) return {s * std::cos(angle), s * std::sin(angle)};
    const double a = Heading(s);
    return {(std::sin(a) - std::sin(angle)) / curvature,
            -(std::cos(a) - std::cos(angle)) / curvature};
  }
  // Unit normal pointing to the "bottom" side (+y for angle 0).
  Point2D Normal(double s) const {
    const double a = Heading(s);
    return {-std::sin(a), std::cos(a)};
  }
};

AxisAlignedBox Bounds(const std::vector<Point2D>& pts) {
  AxisAlignedBox b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
  for (const Point2D& p : pts) {
    b.x1 = std::min(b.x1, p.x);
    b.y1 = std::min(b.y1, p.y);
    b.x2 = std::max(b.x2, p.x);
    b.y2 = std::max(b.y2, p.y);
  }
  return b;
}

bool Overlaps(const AxisAlignedBox& a, const AxisAlignedBox& b, double gap) {
  return a.x1 - gap < b.x2 && b.x1 - gap < a.x2 && a.y1 - gap < b.y2 &&
         b.y1 - gap < a.y2;
}

CharClass RandomCharacter(internal::Rng& rng) {
  const int k = rng.UniformInt(0, 35);
  return k < 10 ? CharClass::Digit(k) : CharClass::Letter(static_cast<char>('a' + k - 10));
}

ShapeKind PickKind(internal::Rng& rng, const ShapeMix& mix) {
  const double total = mix.horizontal + mix.oriented + mix.curved;
  const double u = rng.Uniform01() * total;
  if (u < mix.horizontal) return ShapeKind::kHorizontal;
  if (u < mix.horizontal + mix.oriented) return ShapeKind::kOriented;
  return ShapeKind::kCurved;
}

// Builds one instance around the origin; the caller translates it.
struct Draft {
  ShapeKind kind;
  std::vector<Point2D> polygon;
  std::vector<Point2D> centerline;
  std::vector<Point2D> char_centers;
  std::vector<AxisAlignedBox> char_boxes;
  std::vector<CharClass> classes;
  double height;
};

Draft MakeDraft(internal::Rng& rng, const ShapeMix& mix) {
  Draft d;
  d.kind = PickKind(rng, mix);
  d.height = rng.Uniform(kMinCharHeight, kMaxCharHeight);
  const double h = d.height;
  int n = rng.UniformInt(mix.min_chars, mix.max_chars);
  if (d.kind == ShapeKind::kCurved) n = std::max(n, 4);

  std::vector<double> widths(n);
  for (double& w : widths) w = h * rng.Uniform(0.5, 0.9);
  std::vector<double> s(n, 0.0);
  for (int i = 1; i < n; ++i)
    s[i] = s[i - 1] + widths[i - 1] / 2 + h * rng.Uniform(0.05, 0.2) + widths[i] / 2;
  const double length = s.back();
  const double pad = 0.1 * h;
  const double s0 = -(widths.front() / 2 + pad);
  const double s1 = length + widths.back() / 2 + pad;

  Path path;
  switch (d.kind) {
    case ShapeKind::kHorizontal:
      break;
    case ShapeKind::kOriented:
      path.angle = rng.Uniform(-std::numbers::pi / 4, std::numbers::pi / 4);
      break;
    case ShapeKind::kCurved: {
      const double sweep = rng.Uniform(std::numbers::pi / 4, std::numbers::pi / 2);
      const double sign = rng.Bernoulli(0.5) ? 1.0 : -1.0;
      path.curvature = sign * sweep / (s1 - s0);
      // Center the arc so it reads roughly left to right.
      path.angle = -path.curvature * (s0 + s1) / 2 + rng.Uniform(-0.2, 0.2);
      break;
    }
  }

  std::vector<double> samples;
  if (d.kind == ShapeKind::kCurved) {
    const int k = std::max(8, n + 3);
    for (int i = 0; i < k; ++i) samples.push_back(s0 + (s1 - s0) * i / (k - 1));
  } else {
    samples = {s0, s1};
  }
  // Top side left to right, then bottom side right to left.
  for (double t : samples) {
    const Point2D p = path.At(t), nrm = path.Normal(t);
    d.polygon.push_back({p.x - nrm.x * h / 2, p.y - nrm.y * h / 2});
  }
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    const Point2D p = path.At(*it), nrm = path.Normal(*it);
    d.polygon.push_back({p.x + nrm.x * h / 2, p.y + nrm.y * h / 2});
  }

  const AxisAlignedBox outer = Bounds(d.polygon);
  for (int i = 0; i < n; ++i) {
    const Point2D c = path.At(s[i]);
    const double a = path.Heading(s[i]);
    const double hx = std::abs(std::cos(a)) * widths[i] / 2 + std::abs(std::sin(a)) * h / 2;
    const double hy = std::abs(std::sin(a)) * widths[i] / 2 + std::abs(std::cos(a)) * h / 2;
    d.char_centers.push_back(c);
    d.char_boxes.push_back({std::max(c.x - hx, outer.x1), std::max(c.y - hy, outer.y1),
                            std::min(c.x + hx, outer.x2), std::min(c.y + hy, outer.y2)});
    d.classes.push_back(RandomCharacter(rng));
  }
  if (d.kind == ShapeKind::kCurved) {
    d.centerline = d.char_centers;
  } else {
    d.centerline = {d.char_centers.front(), d.char_centers.back()};
  }
  return d;
}

}  // namespace

void ShapeMix::Check() const {
  if (!(horizontal >= 0 && oriented >= 0 && curved >= 0) ||
      !(horizontal + oriented + curved > 0))
    throw std::invalid_argument("shape weights must be >= 0 with positive sum");
  if (!(difficult_prob >= 0 && difficult_prob <= 1))
    throw std::invalid_argument("difficult_prob must be in [0, 1]");
  if (min_chars < 2 || max_chars < min_chars)
    throw std::invalid_argument("need 2 <= min_chars <= max_chars");
}

void NoiseConfig::Check() const {
  if (!(drop_prob >= 0 && drop_prob <= 1))
    throw std::invalid_argument("drop_prob must be in [0, 1]");
  if (!(jitter_frac >= 0) || !std::isfinite(jitter_frac))
    throw std::invalid_argument("jitter_frac must be >= 0");
  if (!(spurious_per_image >= 0) || !std::isfinite(spurious_per_image))
    throw std::invalid_argument("spurious_per_image must be >= 0");
  if (!(score_floor >= 0 && score_floor <= 1))
    throw std::invalid_argument("score_floor must be in [0, 1]");
  if (map_blur_radius < 0)
    throw std::invalid_argument("map_blur_radius must be >= 0");
}

SyntheticScene GenerateScene(std::uint64_t seed, int n_instances,
                             const ShapeMix& mix, int width, int height,
                             std::string image_id) {
  if (n_instances < 1) throw std::invalid_argument("n_instances must be >= 1");
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("canvas dimensions must be positive");
  mix.Check();
  SyntheticScene scene;
  scene.image_id = image_id.empty() ? "scene_" + std::to_string(seed) : std::move(image_id);
  scene.width = width;
  scene.height = height;

  internal::Rng rng(seed);
  std::vector<AxisAlignedBox> placed;
  int attempts = 0;
  while (static_cast<int>(scene.instances.size()) < n_instances) {
    if (++attempts > kPlacementAttempts)
      throw std::runtime_error("canvas too small to place " +
                               std::to_string(n_instances) + " instances");
    Draft d = MakeDraft(rng, mix);
    const bool difficult = rng.Bernoulli(mix.difficult_prob);
    const AxisAlignedBox b = Bounds(d.polygon);
    const double tx_lo = kCanvasMargin - b.x1, tx_hi = width - kCanvasMargin - b.x2;
    const double ty_lo = kCanvasMargin - b.y1, ty_hi = height - kCanvasMargin - b.y2;
    if (tx_lo > tx_hi || ty_lo > ty_hi) continue;
    const double tx = rng.Uniform(tx_lo, tx_hi), ty = rng.Uniform(ty_lo, ty_hi);
    const AxisAlignedBox moved{b.x1 + tx, b.y1 + ty, b.x2 + tx, b.y2 + ty};
    if (std::any_of(placed.begin(), placed.end(), [&](const AxisAlignedBox& o) {
          return Overlaps(o, moved, kInstanceGap);
        }))
      continue;
    placed.push_back(moved);

    auto shift = [&](std::vector<Point2D> pts) {
      for (Point2D& p : pts) p = {p.x + tx, p.y + ty};
      return pts;
    };
    SyntheticInstance inst{d.kind, Polygon(shift(d.polygon)),
                           Polyline(shift(d.centerline)), {}, d.height,
                           difficult, {}};
    for (std::size_t i = 0; i < d.char_boxes.size(); ++i) {
      const AxisAlignedBox& cb = d.char_boxes[i];
      inst.char_boxes.push_back(
          {{cb.x1 + tx, cb.y1 + ty, cb.x2 + tx, cb.y2 + ty}, 1.0, d.classes[i]});
      inst.transcript += d.classes[i].symbol();
    }
    scene.instances.push_back(std::move(inst));
  }
  return scene;
}

namespace {

RasterGrid IdealMap(const SyntheticScene& scene) {
  BinaryMask strokes(scene.width, scene.height);
  for (const SyntheticInstance& inst : scene.instances) {
    if (inst.difficult) continue;
    strokes |= RasterizePolyline(inst.centerline, kScribbleThickness,
                                 scene.width, scene.height);
  }
  std::vector<double> values(strokes.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (strokes.GetIndex(i)) values[i] = 1.0;
  }
  return RasterGrid(scene.width, scene.height, std::move(values));
}

// Edge-aware separable box blur, then division by the maximum.
RasterGrid BlurAndRenormalize(const RasterGrid& map, int radius) {
  const int w = map.width(), h = map.height();
  std::vector<double> tmp(static_cast<std::size_t>(w) * h, 0.0);
  std::vector<double> out(tmp.size(), 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int c0 = std::max(0, c - radius), c1 = std::min(w - 1, c + radius);
      double sum = 0.0;
      for (int k = c0; k <= c1; ++k) sum += map.at(k, r);
      tmp[map.Index(c, r)] = sum / (c1 - c0 + 1);
    }
  }
  double peak = 0.0;
  for (int r = 0; r < h; ++r) {
    const int r0 = std::max(0, r - radius), r1 = std::min(h - 1, r + radius);
    for (int c = 0; c < w; ++c) {
      double sum = 0.0;
      for (int k = r0; k <= r1; ++k) sum += tmp[map.Index(c, k)];
      const double v = sum / (r1 - r0 + 1);
      out[map.Index(c, r)] = v;
      peak = std::max(peak, v);
    }
  }
  if (peak > 0.0) {
    for (double& v : out) v = std::min(1.0, v / peak);
  }
  return RasterGrid(w, h, std::move(out));
}

}  // namespace

IdealOutputs MakeIdealOutputs(const SyntheticScene& scene) {
  if (scene.instances.empty())
    throw std::invalid_argument("scene has no instances");
  IdealOutputs out{{}, IdealMap(scene),
                   {scene.image_id, scene.width, scene.height, {}}, {}};
  for (std::size_t i = 0; i < scene.instances.size(); ++i) {
    const SyntheticInstance& inst = scene.instances[i];
    out.detections.insert(out.detections.end(), inst.char_boxes.begin(),
                          inst.char_boxes.end());
    ScribbleInstance scribble;
    scribble.id = static_cast<std::int64_t>(i);
    scribble.difficult = inst.difficult;
    scribble.points =
        inst.difficult ? inst.gt_polygon.vertices() : inst.centerline.points();
    scribble.transcript = inst.transcript;
    out.annotation.instances.push_back(std::move(scribble));
    out.gts.push_back({inst.gt_polygon, inst.difficult});
  }
  return out;
}

DetectorOutputs SimulateDetector(const SyntheticScene& scene,
                                 const NoiseConfig& noise) {
  noise.Check();
  internal::Rng rng(internal::MixSeeds(noise.seed, internal::HashString(scene.image_id)));
  DetectorOutputs out{{}, IdealMap(scene)};
  auto draw_score = [&] {
    return noise.score_floor + (1.0 - noise.score_floor) * rng.Uniform01();
  };

  for (const SyntheticInstance& inst : scene.instances) {
    for (const CharBox& truth : inst.char_boxes) {
      if (rng.Bernoulli(noise.drop_prob)) continue;
      const double w = truth.box.Width(), h = truth.box.Height();
      auto jitter = [&](double size) {
        return (2.0 * rng.Uniform01() - 1.0) * noise.jitter_frac * size;
      };
      AxisAlignedBox box{truth.box.x1 + jitter(w), truth.box.y1 + jitter(h),
                         truth.box.x2 + jitter(w), truth.box.y2 + jitter(h)};
      if (box.x1 > box.x2) std::swap(box.x1, box.x2);
      if (box.y1 > box.y2) std::swap(box.y1, box.y2);
      if (box.x2 - box.x1 < 1.0) box.x2 = box.x1 + 1.0;
      if (box.y2 - box.y1 < 1.0) box.y2 = box.y1 + 1.0;
      out.detections.push_back({box, draw_score(), truth.cls});
    }
  }

  std::vector<AxisAlignedBox> keep_out;
  for (const SyntheticInstance& inst : scene.instances)
    keep_out.push_back(Bounds(inst.gt_polygon.vertices()));
  const int spurious = rng.Poisson(noise.spurious_per_image);
  for (int k = 0; k < spurious; ++k) {
    for (int attempt = 0; attempt < kSpuriousAttempts; ++attempt) {
      const double h = rng.Uniform(kMinCharHeight, kMaxCharHeight);
      const double w = h * rng.Uniform(0.5, 0.9);
      const double x = rng.Uniform(0.0, scene.width - w);
      const double y = rng.Uniform(0.0, scene.height - h);
      const AxisAlignedBox box{x, y, x + w, y + h};
      if (std::any_of(keep_out.begin(), keep_out.end(), [&](const AxisAlignedBox& o) {
            return Overlaps(o, box, kInstanceGap / 2);
          }))
        continue;
      out.detections.push_back({box, draw_score(), CharClass::Unknown()});
      break;
    }
  }

  if (noise.map_blur_radius > 0)
    out.map = BlurAndRenormalize(out.map, noise.map_blur_radius);
  return out;
}

}  // namespace scribble
