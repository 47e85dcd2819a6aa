// scribble/evaluation.cc

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

#include "scribble/evaluation.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace scribble {

namespace {

struct Candidate {
  double iou;
  std::size_t det;
  std::size_t gt;
};

// Cheap rejection before the polygon clip.
bool BoundsOverlap(const Polygon& a, const Polygon& b) {
  auto bounds = [](const Polygon& p) {
    AxisAlignedBox box{p.vertices()[0].x, p.vertices()[0].y, p.vertices()[0].x,
                       p.vertices()[0].y};
    for (const Point2D& v : p.vertices()) {
      box.x1 = std::min(box.x1, v.x);
      box.y1 = std::min(box.y1, v.y);
      box.x2 = std::max(box.x2, v.x);
      box.y2 = std::max(box.y2, v.y);
    }
    return box;
  };
  const AxisAlignedBox ba = bounds(a), bb = bounds(b);
  return ba.x1 < bb.x2 && bb.x1 < ba.x2 && ba.y1 < bb.y2 && bb.y1 < ba.y2;
}

}  // namespace

MatchResult MatchDetections(std::span<const Polygon> dets,
                            std::span<const GroundTruthInstance> gts,
                            double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw std::invalid_argument("iou_threshold must be in (0, 1)");
  std::vector<Candidate> candidates;
  std::vector<char> near_difficult(dets.size(), 0);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (!BoundsOverlap(dets[d], gts[g].polygon)) continue;
      const double iou = PolygonIou(dets[d], gts[g].polygon);
      if (iou < iou_threshold) continue;
      if (gts[g].difficult) {
        near_difficult[d] = 1;
      } else {
        candidates.push_back({iou, d, g});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::make_tuple(-a.iou, a.det, a.gt) <
                     std::make_tuple(-b.iou, b.det, b.gt);
            });
  MatchResult result;
  std::vector<char> det_used(dets.size(), 0), gt_used(gts.size(), 0);
  for (const Candidate& c : candidates) {
    if (det_used[c.det] || gt_used[c.gt]) continue;
    det_used[c.det] = gt_used[c.gt] = 1;
    result.pairs.emplace_back(c.det, c.gt);
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  for (std::size_t d = 0; d < dets.size(); ++d) {
    if (!det_used[d] && near_difficult[d]) result.dont_care.push_back(d);
  }
  return result;
}

std::vector<Polygon> Boundaries(std::span<const DetectionResult> dets) {
  std::vector<Polygon> out;
  out.reserve(dets.size());
  for (const DetectionResult& d : dets) out.push_back(d.boundary);
  return out;
}

MatchResult MatchDetections(std::span<const DetectionResult> dets,
                            std::span<const GroundTruthInstance> gts,
                            double iou_threshold) {
  const auto polygons = Boundaries(dets);
  return MatchDetections(std::span<const Polygon>(polygons), gts, iou_threshold);
}

EvalCounts& EvalCounts::operator+=(const EvalCounts& other) {
  matched += other.matched;
  num_dets += other.num_dets;
  num_gts += other.num_gts;
  return *this;
}

EvalCounts CountMatches(std::span<const Polygon> dets,
                        std::span<const GroundTruthInstance> gts,
                        double iou_threshold) {
  const MatchResult m = MatchDetections(dets, gts, iou_threshold);
  EvalCounts counts;
  counts.matched = static_cast<std::int64_t>(m.pairs.size());
  counts.num_dets = static_cast<std::int64_t>(dets.size() - m.dont_care.size());
  counts.num_gts = std::count_if(gts.begin(), gts.end(),
                                 [](const GroundTruthInstance& g) { return !g.difficult; });
  return counts;
}

EvalReport Summarize(const EvalCounts& counts) {
  EvalReport r;
  r.matched = counts.matched;
  r.num_dets = counts.num_dets;
  r.num_gts = counts.num_gts;
  r.precision_defined = counts.num_dets > 0;
  r.recall_defined = counts.num_gts > 0;
  if (r.precision_defined)
    r.precision = static_cast<double>(counts.matched) / counts.num_dets;
  if (r.recall_defined)
    r.recall = static_cast<double>(counts.matched) / counts.num_gts;
  if (r.precision + r.recall > 0)
    r.f_measure = 2 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

EvalReport Evaluate(std::span<const DetectionResult> dets,
                    std::span<const GroundTruthInstance> gts,
                    double iou_threshold) {
  const auto polygons = Boundaries(dets);
  return Summarize(
      CountMatches(std::span<const Polygon>(polygons), gts, iou_threshold));
}

}  // namespace scribble
