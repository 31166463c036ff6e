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

#include <array>
#include <string>
#include <vector>

#include "hisal/image.hpp"

namespace hisal {

inline constexpr double kDefaultBetaSq = 0.3;
inline constexpr int kSweepLevels = 256;

struct EvalRecord {
    std::string imageId;
    std::array<double, kSweepLevels> precision{};
    std::array<double, kSweepLevels> recall{};
    std::array<double, kSweepLevels> f{};
    double mae = 0.0;
    double bestF = 0.0;
    // Lowest threshold attaining bestF.
    int bestThreshold = 0;
};

struct DatasetSummary {
    std::array<double, kSweepLevels> meanPrecision{};
    std::array<double, kSweepLevels> meanRecall{};
    // Per-image F averaged across images at each threshold.
    std::array<double, kSweepLevels> meanF{};
    double meanMae = 0.0;
    double meanBestF = 0.0;
    // Histogram of complexity scores over [complexityLo, complexityHi],
    // empty when no scores were supplied.
    std::vector<int> complexityCounts;
    double complexityLo = 0.0;
    double complexityHi = 0.0;
};

// Precision = TP/(TP+FP), recall = TP/(TP+FN); each 0/0 case is defined
// as 1.
std::pair<double, double> precision_recall(const BinaryMask& pred, const BinaryMask& gt);

// (1 + betaSq) * p * r / (betaSq * p + r); 0 when p = r = 0.
double f_measure(double p, double r, double betaSq = kDefaultBetaSq);

// Mean absolute per-pixel difference.
double mae(const SaliencyMap& map, const BinaryMask& gt);

// Binarizes round(255 * s) >= threshold for every threshold in [0, 255] and
// records precision, recall, and F at each, plus MAE and the best F.
EvalRecord pr_sweep(const SaliencyMap& map, const BinaryMask& gt,
                    double betaSq = kDefaultBetaSq);

// Chi-square distance between foreground and background CIELab histograms
// (32 bins per channel, summed over L, a, b). Requires both classes present.
double dataset_complexity(const ImageRGB& img, const BinaryMask& gt);

// Threshold-wise means across records plus mean MAE and mean best F. When
// complexity scores are given, bins them over their observed range.
DatasetSummary aggregate(const std::vector<EvalRecord>& records,
                         const std::vector<double>& complexityScores = {});

// CSV with columns threshold, meanPrecision, meanRecall, meanF.
void write_curve_csv(const std::string& path, const DatasetSummary& summary);

// CSV with columns imageId, mae, bestF, bestThreshold.
void write_per_image_csv(const std::string& path, const std::vector<EvalRecord>& records);

// JSON object with the scalar summary fields and the complexity histogram.
void write_summary_json(const std::string& path, const DatasetSummary& summary);

}  // namespace hisal
