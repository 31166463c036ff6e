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

#include "hisal/cues.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hisal/color.hpp"

namespace hisal {

std::vector<double> local_contrast_raw(const std::vector<Region>& regions,
                                       const CueParams& params,
                                       int t) {
    if (t < 1) throw std::invalid_argument("local_contrast_raw: t < 1");
    const double sigmaSq = params.sigmaSqFactor * t;
    const std::size_t n = regions.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = regions[i].cx - regions[j].cx;
            const double dy = regions[i].cy - regions[j].cy;
            const double colorDist =
                std::sqrt(color_dist_sq(regions[i].meanColor, regions[j].meanColor));
            sum += regions[j].pixelCount * std::exp(-(dx * dx + dy * dy) / sigmaSq) * colorDist;
        }
        out[i] = sum;
    }
    return out;
}

std::vector<double> location_heuristic_raw(const LabelMap& map,
                                           const std::vector<Region>& regions,
                                           const CueParams& params) {
    std::vector<double> out(regions.size(), 0.0);
    for (int y = 0; y < map.height; ++y) {
        const double py = (y + 0.5) / map.height - 0.5;
        for (int x = 0; x < map.width; ++x) {
            const double px = (x + 0.5) / map.width - 0.5;
            out[map.at(x, y)] += std::exp(-params.lambdaLoc * (px * px + py * py));
        }
    }
    for (const Region& r : regions) {
        if (r.pixelCount > 0) out[r.id] /= static_cast<double>(r.pixelCount);
    }
    return out;
}

std::vector<double> min_max_normalize(const std::vector<double>& values, double eps) {
    if (values.empty()) return {};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double minV = *lo;
    const double denom = *hi - minV + eps;
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - minV) / denom;
    return out;
}

std::vector<double> combine_cues(const std::vector<double>& contrast,
                                 const std::vector<double>& location) {
    if (contrast.size() != location.size()) {
        throw std::invalid_argument("combine_cues: length mismatch");
    }
    std::vector<double> out(contrast.size());
    for (std::size_t i = 0; i < contrast.size(); ++i) out[i] = contrast[i] * location[i];
    return out;
}

LayerCues compute_layer_cues(const LabelMap& map,
                             const std::vector<Region>& regions,
                             const CueParams& params,
                             int t) {
    LayerCues cues;
    cues.contrast =
        min_max_normalize(local_contrast_raw(regions, params, t), params.normalizationEpsilon);
    cues.location = min_max_normalize(location_heuristic_raw(map, regions, params),
                                      params.normalizationEpsilon);
    cues.combined = combine_cues(cues.contrast, cues.location);
    return cues;
}

}  // namespace hisal
