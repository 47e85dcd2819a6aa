// scribble/synth_oracle.h

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

// Deterministic synthetic scenes and a noisy detector simulator. They stand
// in for a trained network: every output has known provenance, so the rest
// of the pipeline can be checked end to end.

#ifndef SCRIBBLE_SYNTH_ORACLE_H_
#define SCRIBBLE_SYNTH_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "scribble/annotation.h"
#include "scribble/evaluation.h"
#include "scribble/geometry.h"
#include "scribble/weak_supervision.h"

namespace scribble {

enum class ShapeKind { kHorizontal, kOriented, kCurved };

struct ShapeMix {
  double horizontal = 1.0;  // relative weights
  double oriented = 1.0;
  double curved = 1.0;
  double difficult_prob = 0.1;
  int min_chars = 3;
  int max_chars = 8;  // curved instances always get at least 4

  void Check() const;
};

struct SyntheticInstance {
  ShapeKind kind = ShapeKind::kHorizontal;
  Polygon gt_polygon;
  /// Through the character centers: 2 points for straight text, one point
  /// per character for curved text.
  Polyline centerline;
  std::vector<CharBox> char_boxes;
  double height = 0.0;  // character height H
  bool difficult = false;
  std::string transcript;
};

struct SyntheticScene {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<SyntheticInstance> instances;
};

inline constexpr int kDefaultSceneWidth = 640;
inline constexpr int kDefaultSceneHeight = 480;

/// Deterministic per (seed, arguments). Instances have pairwise disjoint,
/// margin-separated bounding boxes. Throws std::invalid_argument for
/// n_instances < 1 and std::runtime_error if the canvas cannot fit them.
SyntheticScene GenerateScene(std::uint64_t seed, int n_instances,
                             const ShapeMix& mix = {},
                             int width = kDefaultSceneWidth,
                             int height = kDefaultSceneHeight,
                             std::string image_id = {});

struct IdealOutputs {
  std::vector<CharBox> detections;
  RasterGrid map;
  ImageAnnotation annotation;
  std::vector<GroundTruthInstance> gts;
};

/// Exact character boxes (score 1), centerlines drawn at 1.0 with the
/// scribble thickness for regular instances, scribble annotations (instance
/// id = instance index) and polygon ground truth.
IdealOutputs MakeIdealOutputs(const SyntheticScene& scene);

struct NoiseConfig {
  double drop_prob = 0.0;
  double jitter_frac = 0.0;        // corner jitter, fraction of box size
  double spurious_per_image = 0.0;  // Poisson mean
  double score_floor = 1.0;        // scores uniform on [score_floor, 1]
  int map_blur_radius = 0;         // box blur radius in pixels
  std::uint64_t seed = 0;

  void Check() const;
};

struct DetectorOutputs {
  std::vector<CharBox> detections;
  RasterGrid map;
};

/// Degrades the ideal outputs: independent per-box drops, corner jitter and
/// scores; Poisson-many Unknown boxes placed clear of every instance; a
/// blurred and max-renormalized map. Zero noise reproduces MakeIdealOutputs.
DetectorOutputs SimulateDetector(const SyntheticScene& scene,
                                 const NoiseConfig& noise);

}  // namespace scribble

#endif  // SCRIBBLE_SYNTH_ORACLE_H_
