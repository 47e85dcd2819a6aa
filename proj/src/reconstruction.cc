// scribble/reconstruction.cc

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

#include "scribble/reconstruction.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace scribble {

void ReconstructionConfig::Check() const {
  if (!(t_infer >= 0.0 && t_infer <= 1.0))
    throw std::invalid_argument("t_infer must be in [0, 1]");
  if (!(bin_threshold >= 0.0 && bin_threshold <= 1.0))
    throw std::invalid_argument("bin_threshold must be in [0, 1]");
  if (!(expansion_factor > 0.0) || !std::isfinite(expansion_factor))
    throw std::invalid_argument("expansion_factor must be > 0");
}

std::vector<TextLineRegion> ExtractTextLines(const RasterGrid& map,
                                             double bin_threshold) {
  if (!(bin_threshold >= 0.0 && bin_threshold <= 1.0))
    throw std::invalid_argument("bin_threshold must be in [0, 1]");
  std::vector<TextLineRegion> regions;
  for (BinaryMask& comp : ConnectedComponents(Binarize(map, bin_threshold))) {
    if (comp.Count() < kMinRegionPixels) continue;
    Polygon contour = ExtractContour(comp);
    regions.push_back({static_cast<int>(regions.size()), std::move(comp),
                       std::move(contour)});
  }
  return regions;
}

namespace {

bool CanonicalLess(const CharBox& a, const CharBox& b) {
  const auto key = [](const CharBox& c) {
    return std::make_tuple(c.box.x1, c.box.y1, c.box.x2, c.box.y2, c.score,
                           static_cast<int>(c.cls.kind()), c.cls.symbol());
  };
  return key(a) < key(b);
}

}  // namespace

std::vector<CharGroup> GroupChars(std::span<const CharBox> chars,
                                  std::span<const TextLineRegion> regions,
                                  double t_infer) {
  if (!(t_infer >= 0.0 && t_infer <= 1.0))
    throw std::invalid_argument("t_infer must be in [0, 1]");
  std::map<int, std::vector<CharBox>> by_region;
  for (const CharBox& c : chars) {
    if (c.score < t_infer) continue;
    int best_id = -1;
    double best_overlap = 0.0;
    for (const TextLineRegion& region : regions) {
      const double overlap = BoxMaskOverlapArea(c.box, region.mask);
      if (overlap > best_overlap ||
          (overlap == best_overlap && overlap > 0 && region.region_id < best_id)) {
        best_overlap = overlap;
        best_id = region.region_id;
      }
    }
    if (best_id >= 0) by_region[best_id].push_back(c);
  }
  std::vector<CharGroup> groups;
  groups.reserve(by_region.size());
  for (auto& [id, members] : by_region) {
    std::sort(members.begin(), members.end(), CanonicalLess);
    groups.push_back({id, std::move(members)});
  }
  return groups;
}

double ExpansionDistance(const CharGroup& group) {
  if (group.members.empty())
    throw std::invalid_argument("expansion distance of an empty group");
  double sum = 0.0;
  for (const CharBox& c : group.members)
    sum += std::sqrt(c.box.Height() * c.box.Width());
  return sum / static_cast<double>(group.members.size());
}

std::vector<DetectionResult> Reconstruct(std::span<const TextLineRegion> regions,
                                         std::span<const CharGroup> groups,
                                         const ReconstructionConfig& config) {
  config.Check();
  std::map<int, const TextLineRegion*> by_id;
  for (const TextLineRegion& r : regions) by_id[r.region_id] = &r;

  std::vector<const CharGroup*> ordered;
  for (const CharGroup& g : groups) ordered.push_back(&g);
  std::sort(ordered.begin(), ordered.end(),
            [](const CharGroup* a, const CharGroup* b) {
              return a->region_id < b->region_id;
            });

  std::vector<DetectionResult> out;
  for (const CharGroup* group : ordered) {
    const auto it = by_id.find(group->region_id);
    if (it == by_id.end())
      throw std::invalid_argument("group references unknown region " +
                                  std::to_string(group->region_id));
    const double distance = config.expansion_factor * ExpansionDistance(*group);
    DetectionResult det{BufferPolygon(it->second->contour, distance),
                        group->region_id, std::nullopt,
                        static_cast<int>(group->members.size())};
    if (config.transcript_mode)
      det.transcript = NaiveTranscript(*group, *config.transcript_mode);
    out.push_back(std::move(det));
  }
  return out;
}

std::string NaiveTranscript(const CharGroup& group, ClassMode mode) {
  std::vector<const CharBox*> order;
  for (const CharBox& c : group.members) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const CharBox* a, const CharBox* b) {
                     return a->box.Center().x < b->box.Center().x;
                   });
  std::string text;
  text.reserve(order.size());
  for (const CharBox* c : order) {
    if (mode == ClassMode::kBF) {
      text += '#';
    } else if (c->cls.IsCharacter()) {
      text += c->cls.symbol();
    } else if (c->cls.kind() == CharClass::Kind::kUnknown) {
      text += '?';
    } else {
      text += '#';
    }
  }
  return text;
}

std::vector<DetectionResult> ReconstructBoundaries(
    const RasterGrid& map, std::span<const CharBox> chars,
    const ReconstructionConfig& config) {
  config.Check();
  const auto regions = ExtractTextLines(map, config.bin_threshold);
  const auto groups = GroupChars(chars, regions, config.t_infer);
  return Reconstruct(regions, groups, config);
}

}  // namespace scribble
