// scribble/evaluation.h

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

#ifndef SCRIBBLE_EVALUATION_H_
#define SCRIBBLE_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "scribble/geometry.h"
#include "scribble/reconstruction.h"

namespace scribble {

struct GroundTruthInstance {
  Polygon polygon;
  bool difficult = false;
};

struct MatchResult {
  /// (detection index, ground-truth index) pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  /// Unmatched detections that overlap a difficult ground truth at the
  /// threshold; they are left out of the precision denominator.
  std::vector<std::size_t> dont_care;
};

inline constexpr double kDefaultEvalIou = 0.5;

/// Greedy one-to-one matching over (detection, regular gt) pairs with
/// IoU >= iou_threshold, visited by descending IoU, then detection index,
/// then gt index.
MatchResult MatchDetections(std::span<const Polygon> dets,
                            std::span<const GroundTruthInstance> gts,
                            double iou_threshold = kDefaultEvalIou);
MatchResult MatchDetections(std::span<const DetectionResult> dets,
                            std::span<const GroundTruthInstance> gts,
                            double iou_threshold = kDefaultEvalIou);

/// Per-image counts; summed across images before taking quotients.
struct EvalCounts {
  std::int64_t matched = 0;
  std::int64_t num_dets = 0;  // detections counted (don't-cares excluded)
  std::int64_t num_gts = 0;   // non-difficult ground truths

  EvalCounts& operator+=(const EvalCounts& other);
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::int64_t matched = 0;
  std::int64_t num_dets = 0;
  std::int64_t num_gts = 0;
  bool precision_defined = false;  // num_dets > 0
  bool recall_defined = false;     // num_gts > 0
};

EvalCounts CountMatches(std::span<const Polygon> dets,
                        std::span<const GroundTruthInstance> gts,
                        double iou_threshold = kDefaultEvalIou);

/// P = matched / num_dets, R = matched / num_gts, F = 2PR / (P + R). Each is
/// 0 when its denominator is 0.
EvalReport Summarize(const EvalCounts& counts);

EvalReport Evaluate(std::span<const DetectionResult> dets,
                    std::span<const GroundTruthInstance> gts,
                    double iou_threshold = kDefaultEvalIou);

std::vector<Polygon> Boundaries(std::span<const DetectionResult> dets);

}  // namespace scribble

#endif  // SCRIBBLE_EVALUATION_H_
