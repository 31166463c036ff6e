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

#include <vector>

#include "hisal/segmentation.hpp"

namespace hisal {

struct CueParams {
    // Multiplier on the layer threshold giving the contrast falloff sigma^2.
    double sigmaSqFactor = 0.04;
    // Decay rate of the center-distance weight in the location cue.
    double lambdaLoc = 9.0;
    // Added to the min-max denominator so normalized cues stay below 1.
    double normalizationEpsilon = 1e-12;
};

// Per-region cue values for one layer, all in [0, 1).
struct LayerCues {
    std::vector<double> contrast;
    std::vector<double> location;
    std::vector<double> combined;
};

// Color contrast against all other regions of the layer, each weighted by its
// pixel count and a Gaussian falloff in centroid distance with
// sigma^2 = sigmaSqFactor * t. Unnormalized.
std::vector<double> local_contrast_raw(const std::vector<Region>& regions,
                                       const CueParams& params,
                                       int t);

// Mean over the region's pixels of exp(-lambdaLoc * squared distance to the
// image center), computed on pixel centers in normalized coordinates.
// Unnormalized.
std::vector<double> location_heuristic_raw(const LabelMap& map,
                                           const std::vector<Region>& regions,
                                           const CueParams& params);

// (v - min) / (max - min + eps), elementwise. A constant vector maps to all
// zeros.
std::vector<double> min_max_normalize(const std::vector<double>& values, double eps);

// Elementwise product of the two normalized cues.
std::vector<double> combine_cues(const std::vector<double>& contrast,
                                 const std::vector<double>& location);

// Full cue computation for one layer at effective threshold t.
LayerCues compute_layer_cues(const LabelMap& map,
                             const std::vector<Region>& regions,
                             const CueParams& params,
                             int t);

}  // namespace hisal
