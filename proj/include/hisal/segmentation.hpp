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

#ifndef HISAL_SEGMENTATION_HPP
#define HISAL_SEGMENTATION_HPP

#include <array>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "hisal/image.hpp"

namespace hisal {

/// Integer region-index raster. Labels are dense in [0, regionCount) and
/// every region is a 4-connected pixel set.
struct LabelMap {
    int width = 0;
    int height = 0;
    int regionCount = 0;
    std::vector<std::int32_t> labels;  // row-major, size width * height

    LabelMap() = default;
    LabelMap(int w, int h)
        : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0) {}

    std::int32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    std::int32_t& at(int x, int y) {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
};

/// Per-region statistics. Centroid lives in normalized [0,1]^2 coordinates
/// (pixel centers divided by image width/height).
struct Region {
    int id = 0;
    long long pixelCount = 0;
    std::array<double, 3> meanColor{};  // CIELUV
    double cx = 0.0;
    double cy = 0.0;
    int scale = 0;  // encompassment scale, see scale_merge.hpp
    std::set<int> neighbors;
};

/// Region statistics recomputed from the raster. Colors come from `luv`
/// when given, otherwise stay zero. Adjacency is 4-connected and symmetric.
std::vector<Region> compute_regions(const LabelMap& map, const ImageLuv* luv = nullptr);

/// Marker-based watershed over-segmentation of the CIELUV color-gradient
/// magnitude. Deterministic: markers are the regional minima of the
/// quantized gradient, plateau and flooding ties break in scanline order.
/// A constant image yields exactly one region.
std::pair<LabelMap, std::vector<Region>> watershed_oversegment(const ImageLuv& img);

/// Debug rendering of a label map with one pseudo-random color per label.
ImageRGB label_map_to_rgb(const LabelMap& map);

}  // namespace hisal

#endif  // HISAL_SEGMENTATION_HPP
