// scribble/scribble.cc

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

#include <csignal>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scribble/io.h"
#include "scribble/project.h"
#include "scribble/service.h"

namespace {

scribble::AnnotationService* g_service = nullptr;

void HandleSignal(int) {
  if (g_service != nullptr) g_service->Stop();
}

}  // namespace

int main(int argc, char* argv[]) {
  using namespace scribble;
  try {
    CLI::App app{
        "Scribble-line weak annotation toolkit for scene text.\n"
        "\n"
        "Usage:  scribble <command> [options] <project-dir>\n"
        "e.g.: scribble synth --images 50 --seed 7 corpus && scribble pipeline corpus\n"};
    app.require_subcommand(1);

    std::string project;
    std::string annotator;
    std::uint64_t seed = 0;

    // validate
    CLI::App* validate = app.add_subcommand("validate", "Check every annotation file.");
    validate->add_option("project", project, "Project directory")->required();
    validate->add_option("--annotator", annotator, "Annotator name (default set if empty)");

    // pipeline
    PipelineOptions pipeline_opts;
    std::string class_mode;
    bool no_pseudo = false;
    CLI::App* pipeline = app.add_subcommand(
        "pipeline", "Pseudo-label, reconstruct boundaries and evaluate every image.");
    pipeline->add_option("project", project, "Project directory")->required();
    pipeline->add_option("--t-pseudo", pipeline_opts.t_pseudo, "Pseudo-label score threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    pipeline->add_option("--t-infer", pipeline_opts.recon.t_infer,
                         "Character score threshold at inference")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    pipeline->add_option("--bin-threshold", pipeline_opts.recon.bin_threshold,
                         "Text-line map binarization threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    pipeline->add_option("--expansion-factor", pipeline_opts.recon.expansion_factor,
                         "Multiplier on the expansion distance")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    pipeline->add_option("--match-iou", pipeline_opts.match_iou, "Evaluation IoU threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    pipeline->add_option("--class-mode", class_mode,
                         "Attach transcripts using this class layout (bf, all, allbf)")
        ->check(CLI::IsMember({"bf", "all", "allbf"}));
    pipeline->add_flag("--no-pseudo", no_pseudo, "Group raw detections, skip pseudo labels");
    pipeline->add_option("--annotator", annotator, "Annotator whose scribbles filter boxes");
    pipeline->add_option("--threads", pipeline_opts.threads, "Worker threads (0: all cores)")
        ->check(CLI::NonNegativeNumber);

    // perturb
    double offset = 0.0;
    CLI::App* perturb = app.add_subcommand(
        "perturb", "Write annotations-perturbed/ with scribble deviation noise.");
    perturb->add_option("project", project, "Project directory")->required();
    perturb->add_option("--offset", offset, "Deviation as a fraction of instance height")
        ->required()
        ->check(CLI::NonNegativeNumber);
    perturb->add_option("--seed", seed, "Random seed")->capture_default_str();
    perturb->add_option("--annotator", annotator, "Annotator name");

    // cost
    CLI::App* cost = app.add_subcommand("cost", "Print annotation cost metrics as JSON.");
    cost->add_option("project", project, "Project directory")->required();
    cost->add_option("--annotator", annotator, "Annotator name");

    // synth
    SynthOptions synth_opts;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic project.");
    synth->add_option("project", project, "Output project directory")->required();
    synth->add_option("--seed", seed, "Random seed")->capture_default_str();
    synth->add_option("--images", synth_opts.images, "Number of images")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_option("--instances", synth_opts.instances, "Text instances per image")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_option("--width", synth_opts.width, "Image width")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_option("--height", synth_opts.height, "Image height")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_option("--difficult-prob", synth_opts.mix.difficult_prob,
                      "Probability an instance is difficult")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--drop-prob", synth_opts.noise.drop_prob, "Character drop probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--jitter", synth_opts.noise.jitter_frac,
                      "Corner jitter as a fraction of box size")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--spurious", synth_opts.noise.spurious_per_image,
                      "Mean spurious boxes per image")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    synth->add_option("--score-floor", synth_opts.noise.score_floor,
                      "Lowest detection score")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    synth->add_option("--blur-radius", synth_opts.noise.map_blur_radius,
                      "Text-line map blur radius in pixels")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    // eval
    std::string results_dir, gts_dir;
    double eval_iou = kDefaultEvalIou;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate results against ground truth.");
    eval->add_option("results", results_dir, "Directory of results files")->required();
    eval->add_option("gts", gts_dir, "Directory of ground-truth files")->required();
    eval->add_option("--match-iou", eval_iou, "IoU threshold")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    CLI::App* serve = app.add_subcommand("serve", "Serve the annotation HTTP API.");
    serve->add_option("project", project, "Project directory")->required();
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535))->capture_default_str();
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--annotator", annotator, "Annotator name");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int status = app.exit(e);
      return status == 0 ? 0 : 2;
    }

    const ProjectLayout layout{project};

    if (validate->parsed()) {
      std::size_t count = 0;
      const int status = CmdValidate(layout, annotator, std::cout, &count);
      std::cerr << "scribble validate: " << count << " violation(s)\n";
      return status;
    }
    if (pipeline->parsed()) {
      pipeline_opts.use_pseudo_labels = !no_pseudo;
      pipeline_opts.annotator = annotator;
      if (!class_mode.empty()) pipeline_opts.recon.transcript_mode = ParseClassMode(class_mode);
      const PipelineSummary summary = CmdPipeline(layout, pipeline_opts, std::cerr);
      std::cout << ReportToJson(summary.report) << "\n";
      std::cerr << "scribble pipeline: " << summary.images << " image(s), "
                << summary.errors.size() << " failed\n";
      return summary.exit_code;
    }
    if (perturb->parsed()) {
      const PerturbSummary summary = CmdPerturb(layout, offset, seed, annotator);
      for (const std::string& e : summary.errors) std::cerr << "scribble perturb: " << e << "\n";
      std::cerr << "scribble perturb: wrote " << summary.written << " file(s)\n";
      return summary.errors.empty() ? 0 : 1;
    }
    if (cost->parsed()) {
      std::cout << CostReportToJson(CmdCost(layout, annotator)) << "\n";
      return 0;
    }
    if (synth->parsed()) {
      synth_opts.seed = seed;
      CmdSynth(layout, synth_opts);
      std::cerr << "scribble synth: wrote " << synth_opts.images << " image(s) to " << project
                << "\n";
      return 0;
    }
    if (eval->parsed()) {
      std::cout << ReportToJson(CmdEval(results_dir, gts_dir, eval_iou, std::cerr)) << "\n";
      return 0;
    }
    if (serve->parsed()) {
      AnnotationService service(layout, annotator);
      if (!service.Bind(host, port)) {
        std::cerr << "scribble serve: cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      g_service = &service;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cerr << "scribble serve: listening on " << host << ":" << port << "\n";
      const bool ok = service.Serve();
      g_service = nullptr;
      return ok ? 0 : 1;
    }
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "scribble: usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "scribble: " << e.what() << "\n";
    return 1;
  }
}
