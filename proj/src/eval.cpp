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

#include "hisal/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "hisal/color.hpp"
#include "hisal/error.hpp"

namespace hisal {

namespace {

constexpr double kChiEpsilon = 1e-12;
constexpr int kComplexityBins = 32;

void require_same_dims(int w1, int h1, int w2, int h2, const char* who) {
    if (w1 != w2 || h1 != h2) {
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::pair<double, double> precision_recall(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_dims(pred.width, pred.height, gt.width, gt.height, "precision_recall");
    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        const bool p = pred.values[i] != 0;
        const bool g = gt.values[i] != 0;
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
    }
    const double precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
    const double recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
    return {precision, recall};
}

double f_measure(double p, double r, double betaSq) {
    if (p < 0 || p > 1 || r < 0 || r > 1) throw std::invalid_argument("f_measure: p,r range");
    if (betaSq <= 0) throw std::invalid_argument("f_measure: betaSq <= 0");
    const double denom = betaSq * p + r;
    if (denom == 0.0) return 0.0;
    return (1.0 + betaSq) * p * r / denom;
}

double mae(const SaliencyMap& map, const BinaryMask& gt) {
    require_same_dims(map.width, map.height, gt.width, gt.height, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        sum += std::abs(map.values[i] - static_cast<double>(gt.values[i]));
    }
    return sum / static_cast<double>(map.values.size());
}

EvalRecord pr_sweep(const SaliencyMap& map, const BinaryMask& gt, double betaSq) {
    require_same_dims(map.width, map.height, gt.width, gt.height, "pr_sweep");
    // Histogram the 8-bit quantized map separately over the two ground-truth
    // classes; suffix sums then give TP and FP at every threshold at once.
    std::array<long long, kSweepLevels> pos{}, neg{};
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const int q = static_cast<int>(std::lround(255.0 * std::clamp(map.values[i], 0.0, 1.0)));
        (gt.values[i] != 0 ? pos : neg)[q] += 1;
    }
    long long gtTotal = 0;
    for (long long c : pos) gtTotal += c;

    EvalRecord rec;
    rec.mae = mae(map, gt);
    long long tp = 0, fp = 0;
    for (int theta = kSweepLevels - 1; theta >= 0; --theta) {
        tp += pos[theta];
        fp += neg[theta];
        const long long fn = gtTotal - tp;
        rec.precision[theta] = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
        rec.recall[theta] = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
        rec.f[theta] = f_measure(rec.precision[theta], rec.recall[theta], betaSq);
    }
    rec.bestF = rec.f[0];
    rec.bestThreshold = 0;
    for (int theta = 1; theta < kSweepLevels; ++theta) {
        if (rec.f[theta] > rec.bestF) {
            rec.bestF = rec.f[theta];
            rec.bestThreshold = theta;
        }
    }
    return rec;
}

double dataset_complexity(const ImageRGB& img, const BinaryMask& gt) {
    require_same_dims(img.width, img.height, gt.width, gt.height, "dataset_complexity");
    const long long fg = gt.count();
    const long long bg = static_cast<long long>(gt.values.size()) - fg;
    if (fg == 0 || bg == 0) {
        throw DegenerateInputError("dataset_complexity: mask has a single class");
    }

    // hist[class][channel][bin], channels L in [0,100], a and b in
    // [-128,128).
    std::array<std::array<std::array<double, kComplexityBins>, 3>, 2> hist{};
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* px = img.px(x, y);
            const std::array<double, 3> lab = rgb_to_lab(px[0], px[1], px[2]);
            const int cls = gt.at(x, y) != 0 ? 0 : 1;
            const int binL =
                std::clamp(static_cast<int>(lab[0] / 100.0 * kComplexityBins), 0,
                           kComplexityBins - 1);
            const int binA =
                std::clamp(static_cast<int>((lab[1] + 128.0) / 256.0 * kComplexityBins), 0,
                           kComplexityBins - 1);
            const int binB =
                std::clamp(static_cast<int>((lab[2] + 128.0) / 256.0 * kComplexityBins), 0,
                           kComplexityBins - 1);
            hist[cls][0][binL] += 1.0;
            hist[cls][1][binA] += 1.0;
            hist[cls][2][binB] += 1.0;
        }
    }
    for (int cls = 0; cls < 2; ++cls) {
        const double total = cls == 0 ? static_cast<double>(fg) : static_cast<double>(bg);
        for (auto& channel : hist[cls]) {
            for (double& v : channel) v /= total;
        }
    }
    double distance = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (int bin = 0; bin < kComplexityBins; ++bin) {
            const double d = hist[0][c][bin] - hist[1][c][bin];
            distance += 0.5 * d * d / (hist[0][c][bin] + hist[1][c][bin] + kChiEpsilon);
        }
    }
    return distance;
}

DatasetSummary aggregate(const std::vector<EvalRecord>& records,
                         const std::vector<double>& complexityScores) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    DatasetSummary s;
    for (const EvalRecord& r : records) {
        for (int t = 0; t < kSweepLevels; ++t) {
            s.meanPrecision[t] += r.precision[t];
            s.meanRecall[t] += r.recall[t];
            s.meanF[t] += r.f[t];
        }
        s.meanMae += r.mae;
        s.meanBestF += r.bestF;
    }
    const double n = static_cast<double>(records.size());
    for (int t = 0; t < kSweepLevels; ++t) {
        s.meanPrecision[t] /= n;
        s.meanRecall[t] /= n;
        s.meanF[t] /= n;
    }
    s.meanMae /= n;
    s.meanBestF /= n;

    if (!complexityScores.empty()) {
        const auto [lo, hi] = std::minmax_element(complexityScores.begin(),
                                                  complexityScores.end());
        s.complexityLo = *lo;
        s.complexityHi = *hi;
        const int bins = 16;
        s.complexityCounts.assign(bins, 0);
        const double range = s.complexityHi - s.complexityLo;
        for (double v : complexityScores) {
            const int bin =
                range <= 0.0
                    ? 0
                    : std::clamp(static_cast<int>((v - s.complexityLo) / range * bins), 0,
                                 bins - 1);
            s.complexityCounts[bin] += 1;
        }
    }
    return s;
}

void write_curve_csv(const std::string& path, const DatasetSummary& summary) {
    std::ofstream out = open_out(path);
    out << "threshold,meanPrecision,meanRecall,meanF\n";
    out.precision(9);
    for (int t = 0; t < kSweepLevels; ++t) {
        out << t << ',' << summary.meanPrecision[t] << ',' << summary.meanRecall[t] << ','
            << summary.meanF[t] << '\n';
    }
}

void write_per_image_csv(const std::string& path, const std::vector<EvalRecord>& records) {
    std::ofstream out = open_out(path);
    out << "imageId,mae,bestF,bestThreshold\n";
    out.precision(9);
    for (const EvalRecord& r : records) {
        out << r.imageId << ',' << r.mae << ',' << r.bestF << ',' << r.bestThreshold << '\n';
    }
}

void write_summary_json(const std::string& path, const DatasetSummary& summary) {
    nlohmann::json j;
    j["meanMae"] = summary.meanMae;
    j["meanBestF"] = summary.meanBestF;
    j["meanFCurveMax"] = *std::max_element(summary.meanF.begin(), summary.meanF.end());
    if (!summary.complexityCounts.empty()) {
        j["complexity"] = {{"lo", summary.complexityLo},
                           {"hi", summary.complexityHi},
                           {"counts", summary.complexityCounts}};
    }
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace hisal
