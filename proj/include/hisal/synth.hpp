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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hisal/image.hpp"

namespace hisal {

enum class BackgroundKind { kFlat, kCheckerboard, kNoise };
enum class ObjectKind { kDisk, kRectangle, kRing };

// Deterministic test image: a simple bright object over a controlled
// background, with the exact object mask as ground truth.
struct SynthSpec {
    std::string name = "synthetic";
    int width = 400;
    int height = 300;

    BackgroundKind background = BackgroundKind::kFlat;
    // Flat color, checkerboard color A, or noise base color.
    std::array<std::uint8_t, 3> bgColor{40, 40, 45};
    // Second checkerboard color.
    std::array<std::uint8_t, 3> bgColorB{90, 90, 90};
    // Checkerboard tile side in pixels.
    int tile = 8;
    // Width of the lines drawn along tile boundaries; 0 disables them.
    int groutWidth = 0;
    std::array<std::uint8_t, 3> groutColor{230, 230, 230};
    // Plus or minus per-channel range for the noise background.
    int noiseAmplitude = 0;

    ObjectKind object = ObjectKind::kDisk;
    std::array<std::uint8_t, 3> objectColor{230, 90, 40};
    // Object center in pixel coordinates.
    double cx = 200.0;
    double cy = 150.0;
    // Disk radius, rectangle width, or ring outer radius.
    double size = 60.0;
    // Rectangle height or ring inner radius; unused for disks.
    double sizeB = 40.0;

    std::uint64_t seed = 0;
};

// Renders the spec. The mask marks exactly the drawn object pixels. Same
// spec, same bytes. Throws std::invalid_argument when the object does not
// fit inside the canvas.
std::pair<ImageRGB, BinaryMask> generate(const SynthSpec& spec);

// JSON round trip. Accepted keys mirror the field names; background is one
// of "flat", "checker", "noise" and object one of "disk", "rect", "ring".
std::string spec_to_json(const SynthSpec& spec);
SynthSpec spec_from_json(const std::string& text);

// Parses a spec file holding either a single spec object or an array of
// them (optionally wrapped as {"suite": [...]}).
std::vector<SynthSpec> load_spec_file(const std::string& path);

// The 20-image benchmark: flat, checkerboard (4 px and 8 px tiles with
// 1-px contrasting grout lines), and noise backgrounds crossed with disk,
// rectangle, and ring objects plus shifted and recolored variants.
std::vector<SynthSpec> benchmark_suite();

}  // namespace hisal
