// scribble/reconstruction.h

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

// Boundary reconstruction: text-line regions from the probability map,
// character boxes grouped onto them by maximal overlap, and each region's
// contour grown by the mean character size of its group.

#ifndef SCRIBBLE_RECONSTRUCTION_H_
#define SCRIBBLE_RECONSTRUCTION_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scribble/geometry.h"
#include "scribble/weak_supervision.h"

namespace scribble {

struct TextLineRegion {
  int region_id = 0;
  BinaryMask mask;
  Polygon contour;
};

struct CharGroup {
  int region_id = 0;
  std::vector<CharBox> members;
};

struct DetectionResult {
  Polygon boundary;
  int region_id = 0;
  std::optional<std::string> transcript;
  int char_count = 0;
};

struct ReconstructionConfig {
  double t_infer = 0.5;
  double bin_threshold = 0.2;
  double expansion_factor = 1.0;  // multiplies the expansion distance
  /// When set, detections carry a left-to-right transcript.
  std::optional<ClassMode> transcript_mode;

  /// Throws std::invalid_argument on out-of-range values.
  void Check() const;
};

/// Components smaller than this are binarization speckle.
inline constexpr std::size_t kMinRegionPixels = 4;

/// One region per 8-connected component of the binarized map with at least
/// kMinRegionPixels pixels; ids follow row-major order of first pixel.
std::vector<TextLineRegion> ExtractTextLines(const RasterGrid& map,
                                             double bin_threshold);

/// Drops boxes scoring below t_infer, assigns each survivor to the region
/// with the largest BoxMaskOverlapArea (lowest region_id on ties), drops
/// boxes touching no region. Groups come back sorted by region_id with
/// members in a canonical order; empty groups are omitted.
std::vector<CharGroup> GroupChars(std::span<const CharBox> chars,
                                  std::span<const TextLineRegion> regions,
                                  double t_infer);

/// Mean of sqrt(h * w) over the group. Throws on an empty group.
double ExpansionDistance(const CharGroup& group);

/// One detection per group: the region contour buffered by
/// expansion_factor * ExpansionDistance. Throws std::invalid_argument if a
/// group names a missing region.
std::vector<DetectionResult> Reconstruct(std::span<const TextLineRegion> regions,
                                         std::span<const CharGroup> groups,
                                         const ReconstructionConfig& config);

/// Member classes in ascending box-center x. Unknown renders as '?';
/// Foreground, Background, and every member under kBF render as '#'.
std::string NaiveTranscript(const CharGroup& group, ClassMode mode);

/// The whole inference path for one image: extract, group, reconstruct.
std::vector<DetectionResult> ReconstructBoundaries(
    const RasterGrid& map, std::span<const CharBox> chars,
    const ReconstructionConfig& config);

}  // namespace scribble

#endif  // SCRIBBLE_RECONSTRUCTION_H_
