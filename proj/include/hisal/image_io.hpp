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

#ifndef HISAL_IMAGE_IO_HPP
#define HISAL_IMAGE_IO_HPP

#include <string>

#include "hisal/image.hpp"

namespace hisal {

/// Decode a PNG (8-bit RGB, RGBA, gray, palette) or binary PPM/PGM file.
/// Grayscale sources are replicated into three equal channels; alpha is
/// dropped. Throws IoError if unreadable, FormatError if not a supported
/// format.
ImageRGB load_image(const std::string& path);

/// Write an 8-bit grayscale PNG with value = round(saliency * 255),
/// round half up. Throws IoError on failure.
void write_saliency_map(const SaliencyMap& map, const std::string& path);

/// Write an 8-bit RGB PNG (debug dumps). Throws IoError on failure.
void write_rgb_png(const ImageRGB& img, const std::string& path);

/// Load a grayscale saliency map back into [0,1]. Accepts any image this
/// library can decode; channels are averaged.
SaliencyMap load_saliency_map(const std::string& path);

/// Load a binary mask: pixels with mean channel value >= 128 are foreground.
BinaryMask load_mask(const std::string& path);

}  // namespace hisal

#endif  // HISAL_IMAGE_IO_HPP
