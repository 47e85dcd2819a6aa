// scribble/project.h

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

// Project directory layout and the command implementations behind the
// `scribble` tool.
//
//   <root>/images/index.json        [{"id","width","height","file"?}]
//   <root>/annotations/<id>.json    default annotator
//   <root>/annotations/<name>/      one directory per named annotator
//   <root>/annotations-perturbed/   written by perturb
//   <root>/detections/<id>.json
//   <root>/maps/<id>.tlm
//   <root>/gts/<id>.json
//   <root>/pseudo_labels/<id>.json  written by pipeline
//   <root>/results/<id>.json        written by pipeline
//   <root>/report.json              written by pipeline

#ifndef SCRIBBLE_PROJECT_H_
#define SCRIBBLE_PROJECT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "scribble/annotation.h"
#include "scribble/evaluation.h"
#include "scribble/reconstruction.h"
#include "scribble/synth_oracle.h"

namespace scribble {

namespace fs = std::filesystem;

struct ProjectLayout {
  fs::path root;

  fs::path Images() const { return root / "images"; }
  fs::path ImageIndex() const { return Images() / "index.json"; }
  fs::path Annotations(const std::string& annotator = {}) const {
    return annotator.empty() ? root / "annotations" : root / "annotations" / annotator;
  }
  fs::path PerturbedAnnotations() const { return root / "annotations-perturbed"; }
  fs::path Detections() const { return root / "detections"; }
  fs::path Maps() const { return root / "maps"; }
  fs::path Gts() const { return root / "gts"; }
  fs::path PseudoLabels() const { return root / "pseudo_labels"; }
  fs::path Results() const { return root / "results"; }
  fs::path Report() const { return root / "report.json"; }

  fs::path AnnotationFile(const std::string& id, const std::string& annotator = {}) const {
    return Annotations(annotator) / (id + ".json");
  }
  fs::path MapFile(const std::string& id) const { return Maps() / (id + ".tlm"); }
};

struct ImageInfo {
  std::string id;
  int width = 0;
  int height = 0;
  std::optional<std::string> file;  // relative to images/
};

std::vector<ImageInfo> LoadImageIndex(const ProjectLayout& layout);
void WriteImageIndex(const ProjectLayout& layout, const std::vector<ImageInfo>& images);

/// Sorted stems of the *.json files directly inside `dir`; empty if the
/// directory does not exist.
std::vector<std::string> ListJsonStems(const fs::path& dir);

/// H per regular scribble: the ground-truth polygon holding most of its
/// points (lowest index on ties, nearest centroid if none), measured with
/// InstanceHeight.
std::map<std::int64_t, double> EstimateHeights(
    const ImageAnnotation& annotation, const std::vector<GroundTruthInstance>& gts);

/// Scribbles of the regular instances that form valid polylines.
std::vector<Polyline> RegularScribbles(const ImageAnnotation& annotation);

// ---------------------------------------------------------------------------

/// Prints one line per violation: image, instance (or "-"), rule, message.
/// Returns 0 when every file parses and validates, 1 otherwise.
int CmdValidate(const ProjectLayout& layout, const std::string& annotator,
                std::ostream& out, std::size_t* violation_count = nullptr);

struct PipelineOptions {
  double t_pseudo = kDefaultPseudoThreshold;
  ReconstructionConfig recon;
  double match_iou = kDefaultEvalIou;
  /// Group pseudo labels instead of raw detections when an annotation exists.
  bool use_pseudo_labels = true;
  std::string annotator;
  int threads = 0;  // 0: hardware concurrency
};

struct PipelineSummary {
  EvalReport report;
  std::size_t images = 0;
  std::vector<std::string> errors;  // "<image_id>: <what>"
  int exit_code = 0;                // 1 iff every image failed
};

/// Runs pseudo-labeling (optional), reconstruction and evaluation for every
/// image with ground truth; writes results/, pseudo_labels/ and report.json.
PipelineSummary CmdPipeline(const ProjectLayout& layout, const PipelineOptions& options,
                            std::ostream& log);

struct PerturbSummary {
  std::size_t written = 0;
  std::vector<std::string> errors;
};

/// Writes annotations-perturbed/<id>.json for every annotation file, with
/// instance heights taken from gts/.
PerturbSummary CmdPerturb(const ProjectLayout& layout, double offset, std::uint64_t seed,
                          const std::string& annotator = {});

CostReport CmdCost(const ProjectLayout& layout, const std::string& annotator = {});

struct SynthOptions {
  std::uint64_t seed = 0;
  int images = 10;
  int instances = 5;
  int width = kDefaultSceneWidth;
  int height = kDefaultSceneHeight;
  ShapeMix mix;
  NoiseConfig noise;  // noise.seed is replaced by `seed`
};

std::string SynthImageId(int index);
SyntheticScene SynthScene(const SynthOptions& options, int index);

/// Writes a complete synthetic project (index, annotations, detections,
/// maps, ground truth).
void CmdSynth(const ProjectLayout& layout, const SynthOptions& options);

/// Evaluates results/<id>.json against gts/<id>.json for every ground-truth
/// file; a missing results file counts as no detections.
EvalReport CmdEval(const fs::path& results_dir, const fs::path& gts_dir,
                   double iou_threshold, std::ostream& log);

}  // namespace scribble

#endif  // SCRIBBLE_PROJECT_H_
