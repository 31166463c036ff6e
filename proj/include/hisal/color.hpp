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

#ifndef HISAL_COLOR_HPP
#define HISAL_COLOR_HPP

#include <array>
#include <cstdint>

#include "hisal/image.hpp"

namespace hisal {

// All conversions assume sRGB input and a D65 white point.

/// One sRGB pixel to CIELUV.
std::array<double, 3> rgb_to_luv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// One sRGB pixel to CIELab. Used only by the dataset-complexity metric.
std::array<double, 3> rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Whole-image conversion; dimension preserving, deterministic.
ImageLuv to_cieluv(const ImageRGB& img);

/// Squared Euclidean distance between two color triples.
inline double color_dist_sq(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

}  // namespace hisal

#endif  // HISAL_COLOR_HPP
