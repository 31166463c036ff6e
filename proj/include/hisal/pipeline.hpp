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

#pragma once

#include <string>
#include <vector>

#include "hisal/cues.hpp"
#include "hisal/eval.hpp"
#include "hisal/image.hpp"
#include "hisal/inference.hpp"
#include "hisal/scale_merge.hpp"

namespace hisal {

enum class InferenceMode { kChs, kHs };

// Every tunable of the detection pipeline, JSON round-trippable.
struct RunConfig {
    int layers = 3;
    // Base square-side thresholds at the 400x300 reference size.
    std::vector<int> thresholds{5, 17, 33};
    CueParams cue;
    InferenceParams infer;
    // kChs runs loopy inference on the full graph; kHs drops the
    // same-layer consistency terms and solves the remaining tree exactly.
    InferenceMode mode = InferenceMode::kChs;
    ScaleMeasure scaleMeasure = ScaleMeasure::kEncompass;
    bool weightedMergeColor = false;
    bool dumpLayers = false;
    bool dumpCues = false;
    bool verbose = false;
};

// Defaults for a given layer count: threshold ladders ending at 33, data
// weights extending [0.5, 4, 2], uniform cross-layer and consistency
// weights.
RunConfig default_config_for_layers(int layers);

// Serialization of every field as a flat JSON object. Unknown keys are
// rejected.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);
RunConfig load_config_file(const std::string& path);

struct DetectResult {
    SaliencyMap map;
    LayerHierarchy hierarchy;
    std::vector<LayerCues> cues;
    // Thresholds after rescaling to the input size.
    std::vector<int> effectiveThresholds;
    BpReport report;
    double seconds = 0.0;
};

// Full pipeline on one image: segment, layer, cue, infer, render.
DetectResult detect(const ImageRGB& img, const RunConfig& config);

// detect() plus file I/O and optional layer/cue dumps next to outPath.
// Prints the convergence report as JSON to stderr when config.verbose.
void run_detect(const std::string& imagePath, const std::string& outPath,
                const RunConfig& config);

struct BatchResult {
    int processed = 0;
    int failed = 0;
};

// Runs detect over every image in imageDir using `jobs` worker threads,
// writing one PNG per image plus a timing CSV into outDir. Failures are
// reported and skipped.
BatchResult run_batch(const std::string& imageDir, const std::string& outDir,
                      const RunConfig& config, int jobs);

struct EvalRunResult {
    int evaluated = 0;
    int skipped = 0;
    DatasetSummary summary;
};

// Pairs same-stem files from mapDir and gtDir, sweeps each pair, and writes
// outPrefix_curves.csv, outPrefix_images.csv, and outPrefix_summary.json.
// When imageDir is nonempty its images feed the complexity histogram.
EvalRunResult run_eval(const std::string& mapDir, const std::string& gtDir,
                       const std::string& outPrefix, const std::string& imageDir = "");

// Renders `count` image/mask pairs from the spec file into outDir/images
// and outDir/masks. count <= 0 renders each spec once; larger counts cycle
// with fresh seeds.
int run_synth(const std::string& specFile, const std::string& outDir, int count);

// benchmark_suite() written to outDir in the same layout.
int run_synth_suite(const std::string& outDir);

}  // namespace hisal
