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

#include "hisal/color.hpp"

#include <cmath>

namespace hisal {

namespace {

// sRGB -> XYZ (D65)
constexpr double RGB_TO_XYZ[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double D65_X = 0.95047;
constexpr double D65_Y = 1.00000;
constexpr double D65_Z = 1.08883;

// CIE thresholds
constexpr double CIE_EPSILON = 216.0 / 24389.0;  // (6/29)^3
constexpr double CIE_KAPPA = 24389.0 / 27.0;     // (29/3)^3

// D65 chromaticity for Luv: u' = 4X/(X+15Y+3Z), v' = 9Y/(X+15Y+3Z)
constexpr double D65_DENOM = D65_X + 15.0 * D65_Y + 3.0 * D65_Z;
constexpr double D65_UPRIME = 4.0 * D65_X / D65_DENOM;
constexpr double D65_VPRIME = 9.0 * D65_Y / D65_DENOM;

inline double srgb_to_linear(double c) {
    return (c <= 0.04045) ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline void rgb_to_xyz(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                       double& x, double& y, double& z) {
    const double rl = srgb_to_linear(r / 255.0);
    const double gl = srgb_to_linear(g / 255.0);
    const double bl = srgb_to_linear(b / 255.0);
    x = RGB_TO_XYZ[0][0] * rl + RGB_TO_XYZ[0][1] * gl + RGB_TO_XYZ[0][2] * bl;
    y = RGB_TO_XYZ[1][0] * rl + RGB_TO_XYZ[1][1] * gl + RGB_TO_XYZ[1][2] * bl;
    z = RGB_TO_XYZ[2][0] * rl + RGB_TO_XYZ[2][1] * gl + RGB_TO_XYZ[2][2] * bl;
}

inline double lightness(double yr) {
    return (yr > CIE_EPSILON) ? 116.0 * std::cbrt(yr) - 16.0 : CIE_KAPPA * yr;
}

inline double lab_f(double t) {
    return (t > CIE_EPSILON) ? std::cbrt(t) : (CIE_KAPPA * t + 16.0) / 116.0;
}

}  // namespace

std::array<double, 3> rgb_to_luv(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    double x, y, z;
    rgb_to_xyz(r, g, b, x, y, z);
    const double L = lightness(y / D65_Y);
    const double denom = x + 15.0 * y + 3.0 * z;
    double u = 0.0, v = 0.0;
    if (denom > 0.0) {
        const double up = 4.0 * x / denom;
        const double vp = 9.0 * y / denom;
        u = 13.0 * L * (up - D65_UPRIME);
        v = 13.0 * L * (vp - D65_VPRIME);
    }
    return {L, u, v};
}

std::array<double, 3> rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    double x, y, z;
    rgb_to_xyz(r, g, b, x, y, z);
    const double fx = lab_f(x / D65_X);
    const double fy = lab_f(y / D65_Y);
    const double fz = lab_f(z / D65_Z);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

ImageLuv to_cieluv(const ImageRGB& img) {
    ImageLuv out(img.width, img.height);
    const std::size_t n = img.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const auto luv = rgb_to_luv(img.data[3 * i], img.data[3 * i + 1], img.data[3 * i + 2]);
        out.data[3 * i] = luv[0];
        out.data[3 * i + 1] = luv[1];
        out.data[3 * i + 2] = luv[2];
    }
    return out;
}

}  // namespace hisal
