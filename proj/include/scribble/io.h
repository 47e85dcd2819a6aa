// scribble/io.h

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

// On-disk formats. All JSON files are UTF-8, compact, with keys in the
// fixed order shown:
//
//   annotation  {"version":"1.0","image":{"id","width","height"},
//                "instances":[{"id","points":[[x,y],...],"difficult",
//                              "transcript"?,"label_time_ms"?}]}
//   detections  {"image_id","chars":[{"box":[x1,y1,x2,y2],"score","class"}],
//                "textline_map"?}
//   gt          {"image_id","instances":[{"polygon":[[x,y],...],"difficult"}]}
//   results     {"image_id","detections":[{"polygon","transcript"?,
//                                          "char_count"}]}
//   report      {"precision","recall","f_measure","matched","num_dets",
//                "num_gts"}
//
// Text-line maps use the binary TLM1 layout: the bytes "TLM1", width and
// height as little-endian uint32, then width * height little-endian
// IEEE-754 float32 values in [0, 1], row-major, top row first.
//
// Parse failures throw FormatError.

#ifndef SCRIBBLE_IO_H_
#define SCRIBBLE_IO_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scribble/annotation.h"
#include "scribble/evaluation.h"
#include "scribble/reconstruction.h"
#include "scribble/weak_supervision.h"

namespace scribble {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kAnnotationVersion = "1.0";

std::string AnnotationToJson(const ImageAnnotation& annotation);
ImageAnnotation AnnotationFromJson(std::string_view text);

struct DetectionsFile {
  std::string image_id;
  std::vector<CharBox> chars;
  std::optional<std::string> textline_map;
};

std::string DetectionsToJson(const DetectionsFile& file);
DetectionsFile DetectionsFromJson(std::string_view text);

struct GroundTruthFile {
  std::string image_id;
  std::vector<GroundTruthInstance> instances;
};

std::string GroundTruthToJson(const GroundTruthFile& file);
GroundTruthFile GroundTruthFromJson(std::string_view text);

struct ResultsFile {
  std::string image_id;
  /// region_id is not stored; reading numbers detections 0, 1, ...
  std::vector<DetectionResult> detections;
};

std::string ResultsToJson(const ResultsFile& file);
ResultsFile ResultsFromJson(std::string_view text);

std::string ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(std::string_view text);

std::string CostReportToJson(const CostReport& report);

std::string EncodeTextLineMap(const RasterGrid& map);
RasterGrid DecodeTextLineMap(std::string_view bytes);

/// Whole-file helpers. Reads throw std::runtime_error on I/O failure.
std::string ReadFile(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

}  // namespace scribble

#endif  // SCRIBBLE_IO_H_
