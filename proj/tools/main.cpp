// Copyright 2026 The hisal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hisal/error.hpp"
#include "hisal/pipeline.hpp"

namespace {

struct CommonFlags {
    std::string configPath;
    std::string mode;
    std::string scaleMeasure;
    int layers = 0;
    bool dumpLayers = false;
    bool dumpCues = false;
    bool verbose = false;
    int jobs = 1;
    bool dumpConfig = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.configPath, "JSON config file");
    cmd->add_option("--mode", flags.mode, "Inference mode")
        ->check(CLI::IsMember({"chs", "hs"}));
    cmd->add_option("--scale-measure", flags.scaleMeasure, "Region size measure")
        ->check(CLI::IsMember({"encompass", "pixels"}));
    cmd->add_option("--layers", flags.layers, "Layer count")->check(CLI::Range(2, 5));
    cmd->add_flag("--dump-layers", flags.dumpLayers, "Write per-layer segmentation PNGs");
    cmd->add_flag("--dump-cues", flags.dumpCues, "Write per-layer cue PNGs");
    cmd->add_flag("--verbose", flags.verbose, "Print a convergence report to stderr");
    cmd->add_option("--jobs", flags.jobs, "Worker threads for batch mode")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--dump-config", flags.dumpConfig,
                  "Print the effective config as JSON and exit");
}

hisal::RunConfig assemble_config(const CommonFlags& flags) {
    hisal::RunConfig c;
    if (!flags.configPath.empty()) c = hisal::load_config_file(flags.configPath);
    if (flags.layers > 0 && flags.layers != c.layers) {
        hisal::RunConfig next = hisal::default_config_for_layers(flags.layers);
        next.cue = c.cue;
        next.infer.sigmaC = c.infer.sigmaC;
        next.infer.labels = c.infer.labels;
        next.infer.maxIters = c.infer.maxIters;
        next.infer.damping = c.infer.damping;
        next.infer.tol = c.infer.tol;
        next.mode = c.mode;
        next.scaleMeasure = c.scaleMeasure;
        next.weightedMergeColor = c.weightedMergeColor;
        next.dumpLayers = c.dumpLayers;
        next.dumpCues = c.dumpCues;
        next.verbose = c.verbose;
        c = next;
    }
    if (flags.mode == "chs") c.mode = hisal::InferenceMode::kChs;
    if (flags.mode == "hs") c.mode = hisal::InferenceMode::kHs;
    if (flags.scaleMeasure == "encompass") c.scaleMeasure = hisal::ScaleMeasure::kEncompass;
    if (flags.scaleMeasure == "pixels") c.scaleMeasure = hisal::ScaleMeasure::kPixels;
    c.dumpLayers = c.dumpLayers || flags.dumpLayers;
    c.dumpCues = c.dumpCues || flags.dumpCues;
    c.verbose = c.verbose || flags.verbose;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical multi-layer saliency detection"};
    app.require_subcommand(0, 1);
    CommonFlags flags;
    add_common(&app, flags);

    std::string imagePath, outPath;
    CLI::App* detect = app.add_subcommand("detect", "Compute a saliency map for one image");
    detect->add_option("image", imagePath, "Input image (PNG or PPM)")->required();
    detect->add_option("output", outPath, "Output saliency PNG")->required();
    add_common(detect, flags);

    std::string imageDir, outDir;
    CLI::App* batch = app.add_subcommand("batch", "Process a directory of images");
    batch->add_option("imageDir", imageDir, "Directory of input images")->required();
    batch->add_option("outDir", outDir, "Directory for saliency PNGs")->required();
    add_common(batch, flags);

    std::string mapDir, gtDir, outPrefix, evalImageDir;
    CLI::App* evalCmd = app.add_subcommand("eval", "Score saliency maps against ground truth");
    evalCmd->add_option("mapDir", mapDir, "Directory of saliency maps")->required();
    evalCmd->add_option("gtDir", gtDir, "Directory of ground-truth masks")->required();
    evalCmd->add_option("outPrefix", outPrefix, "Prefix for CSV/JSON outputs")->required();
    evalCmd->add_option("--images", evalImageDir,
                        "Original images, enables the complexity histogram");
    add_common(evalCmd, flags);

    std::string specFile, synthOutDir;
    int synthCount = 0;
    bool builtinSuite = false;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
    synth->add_option("specFile", specFile, "JSON spec (single object or array)");
    synth->add_option("outDir", synthOutDir, "Dataset output directory");
    synth->add_option("--count", synthCount, "Pairs to emit (0 = one per spec)");
    synth->add_flag("--suite", builtinSuite, "Use the built-in 20-image benchmark suite");
    add_common(synth, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const hisal::RunConfig config = assemble_config(flags);
        if (flags.dumpConfig) {
            std::cout << hisal::config_to_json(config) << '\n';
            return 0;
        }
        if (app.got_subcommand(detect)) {
            hisal::run_detect(imagePath, outPath, config);
            return 0;
        }
        if (app.got_subcommand(batch)) {
            const hisal::BatchResult r = hisal::run_batch(imageDir, outDir, config, flags.jobs);
            return r.failed > 0 ? 1 : 0;
        }
        if (app.got_subcommand(evalCmd)) {
            hisal::run_eval(mapDir, gtDir, outPrefix, evalImageDir);
            return 0;
        }
        if (app.got_subcommand(synth)) {
            if (builtinSuite && synthOutDir.empty()) {
                synthOutDir.swap(specFile);
            }
            if (synthOutDir.empty()) {
                std::cerr << "error: synth needs an output directory\n";
                return 2;
            }
            if (builtinSuite) {
                hisal::run_synth_suite(synthOutDir);
            } else if (specFile.empty()) {
                std::cerr << "error: synth needs a spec file or --suite\n";
                return 2;
            } else {
                hisal::run_synth(specFile, synthOutDir, synthCount);
            }
            return 0;
        }
        std::cerr << app.help();
        return 2;
    } catch (const hisal::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
