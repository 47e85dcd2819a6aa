// scribble/annotation.h

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

#ifndef SCRIBBLE_ANNOTATION_H_
#define SCRIBBLE_ANNOTATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scribble/geometry.h"

namespace scribble {

/// One scribble-annotated text instance. Regular instances hold the clicked
/// centerline points in reading order; difficult (extremely blurry) ones keep
/// their original polygon coordinates in `points` and only ever feed ignore
/// masks and sampling exclusions.
struct ScribbleInstance {
  std::int64_t id = 0;
  std::vector<Point2D> points;
  bool difficult = false;
  std::optional<std::string> transcript;
  std::optional<std::int64_t> label_time_ms;

  friend bool operator==(const ScribbleInstance&,
                         const ScribbleInstance&) = default;
};

struct ImageAnnotation {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<ScribbleInstance> instances;

  friend bool operator==(const ImageAnnotation&,
                         const ImageAnnotation&) = default;
};

struct Violation {
  std::optional<std::int64_t> instance_id;  // absent for image-level rules
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Rule identifiers reported in Violation::rule.
inline constexpr const char* kRuleImageSize = "image-size";
inline constexpr const char* kRuleDuplicateId = "duplicate-id";
inline constexpr const char* kRuleMinPoints = "min-points";
inline constexpr const char* kRuleZeroLength = "zero-length";
inline constexpr const char* kRuleNonFinite = "non-finite";
inline constexpr const char* kRuleOutOfBounds = "out-of-bounds";
inline constexpr const char* kRuleNegativeTime = "negative-label-time";

/// Empty iff the annotation is well formed. Bounds are inclusive:
/// 0 <= x <= width, 0 <= y <= height.
std::vector<Violation> Validate(const ImageAnnotation& annotation);

/// Estimated centerline of a text polygon, sampled at n_points positions at
/// arc fractions (i + 0.5) / n_points. Not part of the labeling workflow;
/// used to convert polygon ground truth and to build test fixtures.
///
/// Polygons with 2k vertices are read in the benchmark convention (one long
/// side, then the other), so the end edges are (k-1, k) and (2k-1, 0). For
/// quadrilaterals the shorter pair of opposite edges is taken as the ends.
/// Throws std::runtime_error if some sample does not fall strictly inside.
Polyline DeriveScribble(const Polygon& gt_polygon, int n_points);

/// Height of a band-like text polygon: the smaller root of
/// h^2 - (P/2) h + A = 0, exact for rectangles; sqrt(A) if no real root.
double InstanceHeight(const Polygon& polygon);

/// Annotation-deviation noise: each coordinate of every non-difficult point
/// moves by u * offset * H with u uniform on [-1/2, 1/2], drawn
/// independently per coordinate, then clamped to the image. The draws depend
/// only on (seed, image_id, instance order), so larger offsets scale the same
/// displacement pattern. `heights` maps instance id to H; a missing entry
/// for a non-difficult instance throws std::invalid_argument.
ImageAnnotation Perturb(const ImageAnnotation& annotation, double offset,
                        const std::map<std::int64_t, double>& heights,
                        std::uint64_t seed);

struct CostReport {
  /// Over non-difficult instances; absent when there are none.
  std::optional<double> avg_points_per_instance;
  /// Over instances carrying label_time_ms; absent when none do.
  std::optional<double> avg_label_time_ms;
  std::int64_t instance_count = 0;
  std::int64_t timed_count = 0;
};

CostReport ComputeCostMetrics(std::span<const ImageAnnotation> annotations);

inline constexpr double kScribbleThickness = 5.0;

struct GroundTruthMasks {
  BinaryMask target;
  BinaryMask ignore;
};

/// Training targets for the text-line map. target is the union of the
/// scribble strokes of regular instances; ignore covers difficult instances
/// (filled polygon for >= 3 points, otherwise a stroke). Ignore wins.
/// Throws std::invalid_argument on an invalid annotation.
GroundTruthMasks MakeGtMasks(const ImageAnnotation& annotation,
                             double thickness = kScribbleThickness);

}  // namespace scribble

#endif  // SCRIBBLE_ANNOTATION_H_
