// scribble/project.cc

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

#include "scribble/project.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "random.h"
#include "scribble/io.h"

namespace scribble {

using Json = nlohmann::ordered_json;

std::vector<ImageInfo> LoadImageIndex(const ProjectLayout& layout) {
  std::vector<ImageInfo> images;
  if (!fs::exists(layout.ImageIndex())) return images;
  Json doc;
  try {
    doc = Json::parse(ReadFile(layout.ImageIndex()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("image index: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw FormatError("image index: expected an array");
  try {
    for (const Json& j : doc) {
      ImageInfo info;
      info.id = j.at("id").get<std::string>();
      info.width = j.at("width").get<int>();
      info.height = j.at("height").get<int>();
      if (j.contains("file")) info.file = j.at("file").get<std::string>();
      if (info.id.empty() || info.width <= 0 || info.height <= 0)
        throw FormatError("image index: bad entry for '" + info.id + "'");
      images.push_back(std::move(info));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("image index: " + std::string(e.what()));
  }
  std::sort(images.begin(), images.end(),
            [](const ImageInfo& a, const ImageInfo& b) { return a.id < b.id; });
  return images;
}

void WriteImageIndex(const ProjectLayout& layout, const std::vector<ImageInfo>& images) {
  Json doc = Json::array();
  for (const ImageInfo& info : images) {
    Json j;
    j["id"] = info.id;
    j["width"] = info.width;
    j["height"] = info.height;
    if (info.file) j["file"] = *info.file;
    doc.push_back(std::move(j));
  }
  fs::create_directories(layout.Images());
  WriteFileAtomic(layout.ImageIndex(), doc.dump());
}

std::vector<std::string> ListJsonStems(const fs::path& dir) {
  std::vector<std::string> stems;
  if (!fs::is_directory(dir)) return stems;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      stems.push_back(entry.path().stem().string());
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

namespace {

Point2D Centroid(const std::vector<Point2D>& points) {
  Point2D c{0.0, 0.0};
  for (const Point2D& p : points) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(points.size());
  c.y /= static_cast<double>(points.size());
  return c;
}

}  // namespace

std::map<std::int64_t, double> EstimateHeights(
    const ImageAnnotation& annotation, const std::vector<GroundTruthInstance>& gts) {
  std::map<std::int64_t, double> heights;
  if (gts.empty()) return heights;
  for (const ScribbleInstance& inst : annotation.instances) {
    if (inst.difficult || inst.points.empty()) continue;
    std::size_t best = 0;
    std::size_t best_count = 0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      std::size_t count = 0;
      for (const Point2D& p : inst.points) count += gts[g].polygon.Contains(p) ? 1 : 0;
      if (count > best_count) {
        best_count = count;
        best = g;
      }
    }
    if (best_count == 0) {
      const Point2D s = Centroid(inst.points);
      double best_d2 = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < gts.size(); ++g) {
        const Point2D c = Centroid(gts[g].polygon.vertices());
        const double d2 = (c.x - s.x) * (c.x - s.x) + (c.y - s.y) * (c.y - s.y);
        if (d2 < best_d2) {
          best_d2 = d2;
          best = g;
        }
      }
    }
    heights[inst.id] = InstanceHeight(gts[best].polygon);
  }
  return heights;
}

std::vector<Polyline> RegularScribbles(const ImageAnnotation& annotation) {
  std::vector<Polyline> scribbles;
  for (const ScribbleInstance& inst : annotation.instances) {
    if (inst.difficult) continue;
    try {
      scribbles.emplace_back(inst.points);
    } catch (const std::invalid_argument&) {
      // Degenerate scribbles overlap nothing.
    }
  }
  return scribbles;
}

int CmdValidate(const ProjectLayout& layout, const std::string& annotator,
                std::ostream& out, std::size_t* violation_count) {
  std::size_t violations = 0;
  const fs::path dir = layout.Annotations(annotator);
  for (const std::string& stem : ListJsonStems(dir)) {
    ImageAnnotation annotation;
    try {
      annotation = AnnotationFromJson(ReadFile(dir / (stem + ".json")));
    } catch (const std::exception& e) {
      out << stem << "\t-\tparse\t" << e.what() << "\n";
      ++violations;
      continue;
    }
    if (annotation.image_id != stem) {
      out << stem << "\t-\timage-id\tfile name does not match image id '"
          << annotation.image_id << "'\n";
      ++violations;
    }
    for (const Violation& v : Validate(annotation)) {
      out << annotation.image_id << "\t"
          << (v.instance_id ? std::to_string(*v.instance_id) : std::string("-")) << "\t"
          << v.rule << "\t" << v.message << "\n";
      ++violations;
    }
  }
  if (violation_count != nullptr) *violation_count = violations;
  return violations == 0 ? 0 : 1;
}

namespace {

struct ImageOutcome {
  EvalCounts counts;
  std::optional<std::string> error;
};

ImageOutcome RunPipelineImage(const ProjectLayout& layout, const PipelineOptions& options,
                              const std::string& id) {
  ImageOutcome outcome;
  GroundTruthFile gt;
  try {
    gt = GroundTruthFromJson(ReadFile(layout.Gts() / (id + ".json")));
  } catch (const std::exception& e) {
    outcome.error = e.what();
    return outcome;
  }
  // A failed image still owes its ground truth to the recall denominator.
  for (const GroundTruthInstance& g : gt.instances) outcome.counts.num_gts += g.difficult ? 0 : 1;
  try {
    const DetectionsFile dets =
        DetectionsFromJson(ReadFile(layout.Detections() / (id + ".json")));
    const fs::path map_path =
        dets.textline_map ? layout.root / *dets.textline_map : layout.MapFile(id);
    const RasterGrid map = DecodeTextLineMap(ReadFile(map_path));

    std::vector<CharBox> chars = dets.chars;
    const fs::path annotation_path = layout.AnnotationFile(id, options.annotator);
    if (options.use_pseudo_labels && fs::exists(annotation_path)) {
      const ImageAnnotation annotation = AnnotationFromJson(ReadFile(annotation_path));
      const std::vector<Polyline> scribbles = RegularScribbles(annotation);
      PseudoLabelSet pseudo = GeneratePseudoLabels(dets.chars, scribbles, options.t_pseudo, id);
      DetectionsFile pseudo_file{id, pseudo.labels, std::nullopt};
      WriteFileAtomic(layout.PseudoLabels() / (id + ".json"), DetectionsToJson(pseudo_file));
      chars = std::move(pseudo.labels);
    }

    std::vector<DetectionResult> results = ReconstructBoundaries(map, chars, options.recon);
    const std::vector<Polygon> boundaries = Boundaries(results);
    outcome.counts = CountMatches(boundaries, gt.instances, options.match_iou);
    WriteFileAtomic(layout.Results() / (id + ".json"),
                    ResultsToJson(ResultsFile{id, std::move(results)}));
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace

PipelineSummary CmdPipeline(const ProjectLayout& layout, const PipelineOptions& options,
                            std::ostream& log) {
  options.recon.Check();
  if (!(options.t_pseudo >= 0.0 && options.t_pseudo <= 1.0))
    throw std::invalid_argument("t_pseudo must lie in [0, 1]");
  if (!(options.match_iou > 0.0 && options.match_iou < 1.0))
    throw std::invalid_argument("match IoU must lie in (0, 1)");

  const std::vector<std::string> ids = ListJsonStems(layout.Gts());
  fs::create_directories(layout.Results());
  if (options.use_pseudo_labels) fs::create_directories(layout.PseudoLabels());

  std::vector<ImageOutcome> outcomes(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < ids.size(); i = next++)
      outcomes[i] = RunPipelineImage(layout, options, ids[i]);
  };
  unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(ids.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  PipelineSummary summary;
  summary.images = ids.size();
  EvalCounts total;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    total += outcomes[i].counts;
    if (outcomes[i].error) {
      summary.errors.push_back(ids[i] + ": " + *outcomes[i].error);
      log << "pipeline: " << summary.errors.back() << "\n";
    }
  }
  summary.report = Summarize(total);
  WriteFileAtomic(layout.Report(), ReportToJson(summary.report));
  summary.exit_code = (!ids.empty() && summary.errors.size() == ids.size()) ? 1 : 0;
  return summary;
}

PerturbSummary CmdPerturb(const ProjectLayout& layout, double offset, std::uint64_t seed,
                          const std::string& annotator) {
  if (!(offset >= 0.0) || !std::isfinite(offset))
    throw std::invalid_argument("offset must be a finite non-negative number");
  PerturbSummary summary;
  const fs::path dir = layout.Annotations(annotator);
  fs::create_directories(layout.PerturbedAnnotations());
  for (const std::string& stem : ListJsonStems(dir)) {
    try {
      const ImageAnnotation annotation = AnnotationFromJson(ReadFile(dir / (stem + ".json")));
      const GroundTruthFile gt =
          GroundTruthFromJson(ReadFile(layout.Gts() / (annotation.image_id + ".json")));
      const std::map<std::int64_t, double> heights = EstimateHeights(annotation, gt.instances);
      const ImageAnnotation perturbed = Perturb(annotation, offset, heights, seed);
      WriteFileAtomic(layout.PerturbedAnnotations() / (stem + ".json"),
                      AnnotationToJson(perturbed));
      ++summary.written;
    } catch (const std::exception& e) {
      summary.errors.push_back(stem + ": " + e.what());
    }
  }
  return summary;
}

CostReport CmdCost(const ProjectLayout& layout, const std::string& annotator) {
  std::vector<ImageAnnotation> annotations;
  const fs::path dir = layout.Annotations(annotator);
  for (const std::string& stem : ListJsonStems(dir))
    annotations.push_back(AnnotationFromJson(ReadFile(dir / (stem + ".json"))));
  return ComputeCostMetrics(annotations);
}

std::string SynthImageId(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth_%04d", index);
  return buf;
}

SyntheticScene SynthScene(const SynthOptions& options, int index) {
  return GenerateScene(internal::MixSeeds(options.seed, static_cast<std::uint64_t>(index)),
                       options.instances, options.mix, options.width, options.height,
                       SynthImageId(index));
}

void CmdSynth(const ProjectLayout& layout, const SynthOptions& options) {
  if (options.images < 1) throw std::invalid_argument("need at least one image");
  options.mix.Check();
  NoiseConfig noise = options.noise;
  noise.seed = options.seed;
  noise.Check();

  for (const fs::path& dir : {layout.Annotations(), layout.Detections(), layout.Maps(),
                              layout.Gts()})
    fs::create_directories(dir);

  std::vector<ImageInfo> index;
  for (int i = 0; i < options.images; ++i) {
    const SyntheticScene scene = SynthScene(options, i);
    const IdealOutputs ideal = MakeIdealOutputs(scene);
    const DetectorOutputs outputs = SimulateDetector(scene, noise);
    const std::string& id = scene.image_id;

    WriteFileAtomic(layout.AnnotationFile(id), AnnotationToJson(ideal.annotation));
    const std::string map_rel = "maps/" + id + ".tlm";
    WriteFileAtomic(layout.root / map_rel, EncodeTextLineMap(outputs.map));
    WriteFileAtomic(layout.Detections() / (id + ".json"),
                    DetectionsToJson(DetectionsFile{id, outputs.detections, map_rel}));
    WriteFileAtomic(layout.Gts() / (id + ".json"),
                    GroundTruthToJson(GroundTruthFile{id, ideal.gts}));
    index.push_back(ImageInfo{id, scene.width, scene.height, std::nullopt});
  }
  WriteImageIndex(layout, index);
}

EvalReport CmdEval(const fs::path& results_dir, const fs::path& gts_dir,
                   double iou_threshold, std::ostream& log) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0))
    throw std::invalid_argument("IoU threshold must lie in (0, 1)");
  EvalCounts total;
  for (const std::string& id : ListJsonStems(gts_dir)) {
    const GroundTruthFile gt = GroundTruthFromJson(ReadFile(gts_dir / (id + ".json")));
    std::vector<Polygon> boundaries;
    const fs::path results_path = results_dir / (id + ".json");
    if (fs::exists(results_path)) {
      boundaries = Boundaries(ResultsFromJson(ReadFile(results_path)).detections);
    } else {
      log << "eval: no results for " << id << "\n";
    }
    total += CountMatches(boundaries, gt.instances, iou_threshold);
  }
  return Summarize(total);
}

}  // namespace scribble
