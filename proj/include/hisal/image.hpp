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

#ifndef HISAL_IMAGE_HPP
#define HISAL_IMAGE_HPP

#include <cstdint>
#include <vector>

namespace hisal {

/// 8-bit RGB raster, row-major, three bytes per pixel.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // size = width * height * 3

    ImageRGB() = default;
    ImageRGB(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
    const std::uint8_t* px(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t* px(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    bool valid() const {
        return width >= 1 && height >= 1 && data.size() == pixels() * 3;
    }
};

/// Per-pixel CIELUV triples. L in [0,100]; u,v unbounded.
struct ImageLuv {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // size = width * height * 3, order L,u,v

    ImageLuv() = default;
    ImageLuv(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0) {}

    std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
    const double* px(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    double* px(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
};

/// Per-pixel real saliency in [0,1].
struct SaliencyMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // size = width * height

    SaliencyMap() = default;
    SaliencyMap(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Binary mask, one byte per pixel, values 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;  // size = width * height

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : values) n += (v != 0);
        return n;
    }
};

}  // namespace hisal

#endif  // HISAL_IMAGE_HPP
