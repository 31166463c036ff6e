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

#include <set>
#include <utility>
#include <vector>

#include "hisal/segmentation.hpp"

namespace hisal {

// How a region's size is judged against a layer threshold. kEncompass uses
// the side of the largest axis-aligned square that fits inside the region;
// kPixels uses the raw pixel count, with a side threshold t meaning t*t
// pixels.
enum class ScaleMeasure { kEncompass, kPixels };

struct ScaleThresholds {
    // Square side lengths, one per layer, bottom layer first. Strictly
    // increasing, defined relative to a 400x300 reference image.
    std::vector<int> perLayer{5, 17, 33};

    static constexpr int kReferenceWidth = 400;
    static constexpr int kReferenceHeight = 300;
};

struct MergeOptions {
    ScaleMeasure measure = ScaleMeasure::kEncompass;
    // When true the surviving color after a merge is the pixel-count-weighted
    // mean instead of the plain average of the two region colors.
    bool weightedColor = false;
};

struct Layer {
    LabelMap labels;
    std::vector<Region> regions;
    // parent[i] is the id of the region one layer up that contains region i.
    // Empty for the top layer.
    std::vector<int> parent;
};

// Nested segmentations from finest (layers[0]) to coarsest.
struct LayerHierarchy {
    std::vector<Layer> layers;
};

// Scales `base` side lengths by sqrt(W*H / 400*300) and rounds each to the
// nearest odd integer, never below 3. A 400x300 image returns `base`
// unchanged.
std::vector<int> rescale_thresholds(const std::vector<int>& base, int width, int height);

// Largest square side per region, for all regions in one pass over the
// raster. Index by region id.
std::vector<int> compute_all_scales(const LabelMap& map);

// Exact largest t such that some t-by-t axis-aligned square lies entirely
// inside the region. Binary search over t; each probe slides a window-sum
// test over the region's bounding box.
int region_scale(const LabelMap& map, const Region& region);

// Ids of regions whose encompassment scale is strictly below t.
std::set<int> scale_below(const LabelMap& map, const std::vector<Region>& regions, int t);

// The traditional size measure used by the ablation switch.
long long pixel_count_scale(const LabelMap& map, const Region& region);

// Repeatedly absorbs undersized regions into their closest-colored neighbor
// until every region meets the threshold (or one region remains). Each pass
// screens for undersized regions, sorts them by ascending size then id, and
// merges each into the adjacent region with the smallest Euclidean CIELUV
// distance between mean colors (ties to the lower id). The surviving color
// follows MergeOptions; centroids and pixel counts are combined exactly.
// Output labels are dense in [0, regionCount).
std::pair<LabelMap, std::vector<Region>> merge_regions(const LabelMap& map,
                                                       const std::vector<Region>& regions,
                                                       int t,
                                                       const MergeOptions& opts = {});

// Builds the layer stack: layer 1 merges the over-segmentation at the first
// rescaled threshold, and each further layer merges its predecessor at the
// next one. Parent links are read off the rasters.
LayerHierarchy extract_layers(const LabelMap& map,
                              const std::vector<Region>& regions,
                              const ScaleThresholds& thresholds,
                              const MergeOptions& opts = {});

// True when every region's pixel set lies inside its parent region and the
// layer rasters agree with the stored parent links.
bool verify_nesting(const LayerHierarchy& hierarchy);

}  // namespace hisal
