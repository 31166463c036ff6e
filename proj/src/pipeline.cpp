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

#include "hisal/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "hisal/color.hpp"
#include "hisal/error.hpp"
#include "hisal/image_io.hpp"
#include "hisal/segmentation.hpp"
#include "hisal/synth.hpp"

namespace fs = std::filesystem;

namespace hisal {

namespace {

const std::vector<std::string> kImageExtensions{".png", ".ppm", ".pgm"};

std::string lower_ext(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

bool is_image_file(const fs::path& p) {
    const std::string ext = lower_ext(p);
    return std::find(kImageExtensions.begin(), kImageExtensions.end(), ext) !=
           kImageExtensions.end();
}

std::vector<fs::path> list_images(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void validate_config(const RunConfig& c) {
    if (c.layers < 2 || c.layers > 5) {
        throw std::invalid_argument("config: layers outside [2,5]");
    }
    if (c.thresholds.size() != static_cast<std::size_t>(c.layers)) {
        throw std::invalid_argument("config: thresholds length != layers");
    }
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
        if (c.thresholds[i] < 1 || (i > 0 && c.thresholds[i] <= c.thresholds[i - 1])) {
            throw std::invalid_argument("config: thresholds must be positive and increasing");
        }
    }
    if (c.infer.beta.size() != static_cast<std::size_t>(c.layers)) {
        throw std::invalid_argument("config: beta length != layers");
    }
    if (c.infer.lambdaH.size() + 1 != static_cast<std::size_t>(c.layers)) {
        throw std::invalid_argument("config: lambdaH length != layers - 1");
    }
    if (c.infer.gamma.size() != static_cast<std::size_t>(c.layers)) {
        throw std::invalid_argument("config: gamma length != layers");
    }
    if (c.infer.labels < 2) throw std::invalid_argument("config: labels < 2");
    if (c.infer.maxIters < 1) throw std::invalid_argument("config: maxIters < 1");
    if (c.infer.damping < 0.0 || c.infer.damping >= 1.0) {
        throw std::invalid_argument("config: damping outside [0,1)");
    }
    if (c.infer.tol <= 0.0) throw std::invalid_argument("config: tol <= 0");
    if (c.cue.sigmaSqFactor <= 0.0 || c.cue.lambdaLoc <= 0.0 ||
        c.cue.normalizationEpsilon <= 0.0) {
        throw std::invalid_argument("config: cue parameters must be positive");
    }
}

nlohmann::json report_json(const DetectResult& r, const std::string& image) {
    nlohmann::json j;
    j["image"] = image;
    nlohmann::json regions = nlohmann::json::array();
    for (const Layer& layer : r.hierarchy.layers) regions.push_back(layer.labels.regionCount);
    j["regionsPerLayer"] = regions;
    j["effectiveThresholds"] = r.effectiveThresholds;
    j["iterations"] = r.report.iterations;
    j["converged"] = r.report.converged;
    j["finalDelta"] = r.report.finalDelta;
    j["energy"] = r.report.energy;
    j["seconds"] = r.seconds;
    return j;
}

void write_dumps(const DetectResult& result, const std::string& outPath) {
    const fs::path out(outPath);
    const fs::path base = out.parent_path() / out.stem();
    for (std::size_t k = 0; k < result.hierarchy.layers.size(); ++k) {
        const Layer& layer = result.hierarchy.layers[k];
        write_rgb_png(label_map_to_rgb(layer.labels),
                      base.string() + "_layer" + std::to_string(k + 1) + ".png");
    }
}

void write_cue_dumps(const DetectResult& result, const std::string& outPath) {
    const fs::path out(outPath);
    const fs::path base = out.parent_path() / out.stem();
    for (std::size_t k = 0; k < result.hierarchy.layers.size(); ++k) {
        const Layer& layer = result.hierarchy.layers[k];
        SaliencyMap cueMap(layer.labels.width, layer.labels.height);
        for (std::size_t p = 0; p < cueMap.values.size(); ++p) {
            cueMap.values[p] = result.cues[k].combined[layer.labels.labels[p]];
        }
        write_saliency_map(cueMap, base.string() + "_cues" + std::to_string(k + 1) + ".png");
    }
}

}  // namespace

RunConfig default_config_for_layers(int layers) {
    if (layers < 2 || layers > 5) throw std::invalid_argument("config: layers outside [2,5]");
    static const std::map<int, std::vector<int>> ladders{
        {2, {5, 33}}, {3, {5, 17, 33}}, {4, {5, 15, 23, 33}}, {5, {5, 13, 19, 27, 33}}};
    RunConfig c;
    c.layers = layers;
    c.thresholds = ladders.at(layers);
    const std::vector<double> betaSeed{0.5, 4.0, 2.0};
    c.infer.beta.clear();
    for (int k = 0; k < layers; ++k) {
        c.infer.beta.push_back(k < static_cast<int>(betaSeed.size()) ? betaSeed[k] : 2.0);
    }
    c.infer.lambdaH.assign(static_cast<std::size_t>(layers) - 1, 4.0);
    c.infer.gamma.assign(static_cast<std::size_t>(layers), 1.0);
    return c;
}

std::string config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["layers"] = config.layers;
    j["thresholds"] = config.thresholds;
    j["sigmaSqFactor"] = config.cue.sigmaSqFactor;
    j["lambdaLoc"] = config.cue.lambdaLoc;
    j["normalizationEpsilon"] = config.cue.normalizationEpsilon;
    j["beta"] = config.infer.beta;
    j["lambdaH"] = config.infer.lambdaH;
    j["gamma"] = config.infer.gamma;
    j["sigmaC"] = config.infer.sigmaC;
    j["labels"] = config.infer.labels;
    j["maxIters"] = config.infer.maxIters;
    j["damping"] = config.infer.damping;
    j["tol"] = config.infer.tol;
    j["mode"] = config.mode == InferenceMode::kChs ? "chs" : "hs";
    j["scaleMeasure"] =
        config.scaleMeasure == ScaleMeasure::kEncompass ? "encompass" : "pixels";
    j["weightedMergeColor"] = config.weightedMergeColor;
    j["dumpLayers"] = config.dumpLayers;
    j["dumpCues"] = config.dumpCues;
    j["verbose"] = config.verbose;
    return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: not a JSON object");
    static const std::vector<std::string> allowed{
        "layers",     "thresholds", "sigmaSqFactor", "lambdaLoc", "normalizationEpsilon",
        "beta",       "lambdaH",    "gamma",         "sigmaC",    "labels",
        "maxIters",   "damping",    "tol",           "mode",      "scaleMeasure",
        "weightedMergeColor", "dumpLayers", "dumpCues", "verbose"};
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");
        }
    }

    const int layers = j.value("layers", 3);
    RunConfig c = default_config_for_layers(layers);
    try {
        if (j.contains("thresholds")) c.thresholds = j.at("thresholds").get<std::vector<int>>();
        if (j.contains("sigmaSqFactor")) c.cue.sigmaSqFactor = j.at("sigmaSqFactor").get<double>();
        if (j.contains("lambdaLoc")) c.cue.lambdaLoc = j.at("lambdaLoc").get<double>();
        if (j.contains("normalizationEpsilon")) {
            c.cue.normalizationEpsilon = j.at("normalizationEpsilon").get<double>();
        }
        if (j.contains("beta")) c.infer.beta = j.at("beta").get<std::vector<double>>();
        if (j.contains("lambdaH")) c.infer.lambdaH = j.at("lambdaH").get<std::vector<double>>();
        if (j.contains("gamma")) c.infer.gamma = j.at("gamma").get<std::vector<double>>();
        if (j.contains("sigmaC")) c.infer.sigmaC = j.at("sigmaC").get<double>();
        if (j.contains("labels")) c.infer.labels = j.at("labels").get<int>();
        if (j.contains("maxIters")) c.infer.maxIters = j.at("maxIters").get<int>();
        if (j.contains("damping")) c.infer.damping = j.at("damping").get<double>();
        if (j.contains("tol")) c.infer.tol = j.at("tol").get<double>();
        if (j.contains("mode")) {
            const std::string mode = j.at("mode").get<std::string>();
            if (mode == "chs") {
                c.mode = InferenceMode::kChs;
            } else if (mode == "hs") {
                c.mode = InferenceMode::kHs;
            } else {
                throw std::invalid_argument("config: mode must be chs or hs");
            }
        }
        if (j.contains("scaleMeasure")) {
            const std::string measure = j.at("scaleMeasure").get<std::string>();
            if (measure == "encompass") {
                c.scaleMeasure = ScaleMeasure::kEncompass;
            } else if (measure == "pixels") {
                c.scaleMeasure = ScaleMeasure::kPixels;
            } else {
                throw std::invalid_argument("config: scaleMeasure must be encompass or pixels");
            }
        }
        if (j.contains("weightedMergeColor")) {
            c.weightedMergeColor = j.at("weightedMergeColor").get<bool>();
        }
        if (j.contains("dumpLayers")) c.dumpLayers = j.at("dumpLayers").get<bool>();
        if (j.contains("dumpCues")) c.dumpCues = j.at("dumpCues").get<bool>();
        if (j.contains("verbose")) c.verbose = j.at("verbose").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: bad value: ") + e.what());
    }
    validate_config(c);
    return c;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

DetectResult detect(const ImageRGB& img, const RunConfig& config) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();

    const ImageLuv luv = to_cieluv(img);
    auto [overMap, overRegions] = watershed_oversegment(luv);

    ScaleThresholds thresholds;
    thresholds.perLayer = config.thresholds;
    MergeOptions mergeOpts;
    mergeOpts.measure = config.scaleMeasure;
    mergeOpts.weightedColor = config.weightedMergeColor;

    DetectResult result;
    result.hierarchy = extract_layers(overMap, overRegions, thresholds, mergeOpts);
    result.effectiveThresholds = rescale_thresholds(config.thresholds, img.width, img.height);

    for (std::size_t k = 0; k < result.hierarchy.layers.size(); ++k) {
        const Layer& layer = result.hierarchy.layers[k];
        result.cues.push_back(compute_layer_cues(layer.labels, layer.regions, config.cue,
                                                 result.effectiveThresholds[k]));
    }

    InferenceParams params = config.infer;
    if (config.mode == InferenceMode::kHs) {
        std::fill(params.gamma.begin(), params.gamma.end(), 0.0);
    }
    const SaliencyGraph graph = build_graph(result.hierarchy, result.cues, params);

    Assignment assignment;
    if (config.mode == InferenceMode::kHs) {
        assignment = hs_inference(graph);
        result.report.iterations = 2;
        result.report.converged = true;
        result.report.finalDelta = 0.0;
        result.report.energy = energy(graph, assignment);
    } else {
        assignment = loopy_bp(graph, params, &result.report);
    }
    result.map = render_saliency(assignment, result.hierarchy.layers.front().labels);

    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void run_detect(const std::string& imagePath, const std::string& outPath,
                const RunConfig& config) {
    const ImageRGB img = load_image(imagePath);
    const DetectResult result = detect(img, config);
    if (const fs::path parent = fs::path(outPath).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    write_saliency_map(result.map, outPath);
    if (config.dumpLayers) write_dumps(result, outPath);
    if (config.dumpCues) write_cue_dumps(result, outPath);
    if (config.verbose) {
        std::cerr << report_json(result, imagePath).dump(2) << '\n';
    }
}

BatchResult run_batch(const std::string& imageDir, const std::string& outDir,
                      const RunConfig& config, int jobs) {
    const std::vector<fs::path> files = list_images(imageDir);
    fs::create_directories(outDir);
    BatchResult result;
    if (files.empty()) {
        std::cerr << "warning: no images found in " << imageDir << '\n';
        return result;
    }

    struct PerImage {
        bool ok = false;
        double seconds = 0.0;
        std::string error;
    };
    std::vector<PerImage> outcomes(files.size());
    std::atomic<std::size_t> nextIndex{0};

    const int workers = std::max(1, jobs);
    auto worker = [&]() {
        while (true) {
            const std::size_t i = nextIndex.fetch_add(1);
            if (i >= files.size()) break;
            try {
                const ImageRGB img = load_image(files[i].string());
                const DetectResult r = detect(img, config);
                const fs::path out = fs::path(outDir) / (files[i].stem().string() + ".png");
                write_saliency_map(r.map, out.string());
                if (config.dumpLayers) write_dumps(r, out.string());
                if (config.dumpCues) write_cue_dumps(r, out.string());
                outcomes[i].ok = true;
                outcomes[i].seconds = r.seconds;
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    std::ofstream timing(fs::path(outDir) / "timing.csv");
    timing << "imageId,seconds\n";
    timing.precision(6);
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (outcomes[i].ok) {
            ++result.processed;
            timing << files[i].stem().string() << ',' << std::fixed << outcomes[i].seconds
                   << '\n';
        } else {
            ++result.failed;
            std::cerr << "error: " << files[i].string() << ": " << outcomes[i].error << '\n';
        }
    }
    if (result.failed > 0) {
        std::cerr << result.failed << " of " << files.size() << " images failed\n";
    }
    return result;
}

EvalRunResult run_eval(const std::string& mapDir, const std::string& gtDir,
                       const std::string& outPrefix, const std::string& imageDir) {
    std::map<std::string, fs::path> maps, gts, imgs;
    for (const fs::path& p : list_images(mapDir)) maps[p.stem().string()] = p;
    for (const fs::path& p : list_images(gtDir)) gts[p.stem().string()] = p;
    if (!imageDir.empty()) {
        for (const fs::path& p : list_images(imageDir)) imgs[p.stem().string()] = p;
    }

    EvalRunResult result;
    std::vector<EvalRecord> records;
    std::vector<double> complexity;
    for (const auto& [stem, mapPath] : maps) {
        const auto gtIt = gts.find(stem);
        if (gtIt == gts.end()) {
            std::cerr << "warning: no ground truth for " << stem << ", skipped\n";
            ++result.skipped;
            continue;
        }
        try {
            const SaliencyMap map = load_saliency_map(mapPath.string());
            const BinaryMask gt = load_mask(gtIt->second.string());
            EvalRecord rec = pr_sweep(map, gt);
            rec.imageId = stem;
            records.push_back(std::move(rec));
            ++result.evaluated;
            if (const auto imgIt = imgs.find(stem); imgIt != imgs.end()) {
                try {
                    complexity.push_back(
                        dataset_complexity(load_image(imgIt->second.string()), gt));
                } catch (const DegenerateInputError& e) {
                    std::cerr << "warning: complexity skipped for " << stem << ": " << e.what()
                              << '\n';
                }
            }
        } catch (const std::exception& e) {
            std::cerr << "warning: " << stem << " skipped: " << e.what() << '\n';
            ++result.skipped;
        }
    }
    for (const auto& [stem, gtPath] : gts) {
        if (maps.find(stem) == maps.end()) {
            std::cerr << "warning: no map for " << stem << ", skipped\n";
            ++result.skipped;
        }
    }
    if (records.empty()) {
        std::cerr << "warning: nothing evaluated\n";
        return result;
    }
    result.summary = aggregate(records, complexity);
    if (const fs::path parent = fs::path(outPrefix).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    write_curve_csv(outPrefix + "_curves.csv", result.summary);
    write_per_image_csv(outPrefix + "_images.csv", records);
    write_summary_json(outPrefix + "_summary.json", result.summary);
    return result;
}

namespace {

int emit_dataset(const std::vector<SynthSpec>& specs, const std::string& outDir, int count) {
    const fs::path images = fs::path(outDir) / "images";
    const fs::path masks = fs::path(outDir) / "masks";
    fs::create_directories(images);
    fs::create_directories(masks);
    const int total = count <= 0 ? static_cast<int>(specs.size()) : count;
    for (int i = 0; i < total; ++i) {
        SynthSpec spec = specs[static_cast<std::size_t>(i) % specs.size()];
        const int cycle = i / static_cast<int>(specs.size());
        if (cycle > 0) {
            spec.seed += static_cast<std::uint64_t>(cycle) * 0x9e3779b97f4a7c15ULL;
            spec.name += "_" + std::to_string(cycle);
        }
        auto [img, mask] = generate(spec);
        write_rgb_png(img, (images / (spec.name + ".png")).string());
        SaliencyMap maskMap(mask.width, mask.height);
        for (std::size_t p = 0; p < mask.values.size(); ++p) {
            maskMap.values[p] = mask.values[p] ? 1.0 : 0.0;
        }
        write_saliency_map(maskMap, (masks / (spec.name + ".png")).string());
    }
    return total;
}

}  // namespace

int run_synth(const std::string& specFile, const std::string& outDir, int count) {
    return emit_dataset(load_spec_file(specFile), outDir, count);
}

int run_synth_suite(const std::string& outDir) {
    return emit_dataset(benchmark_suite(), outDir, 0);
}

}  // namespace hisal
