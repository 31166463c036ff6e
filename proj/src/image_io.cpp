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

#include "hisal/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "hisal/error.hpp"

namespace hisal {

namespace {

ImageRGB load_png(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str())) {
        throw FormatError("bad PNG '" + path + "': " + image.message);
    }
    // Read as RGBA so gray replication and 16->8 scaling happen inside
    // libpng; the alpha byte is discarded below.
    image.format = PNG_FORMAT_RGBA;
    std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("bad PNG '" + path + "': " + msg);
    }
    ImageRGB out(static_cast<int>(image.width), static_cast<int>(image.height));
    const std::size_t n = out.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        out.data[3 * i] = rgba[4 * i];
        out.data[3 * i + 1] = rgba[4 * i + 1];
        out.data[3 * i + 2] = rgba[4 * i + 2];
    }
    return out;
}

// Skips PPM whitespace and '#' comments, then parses one decimal token.
int ppm_token(std::ifstream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) {
        throw FormatError("bad PPM header in '" + path + "'");
    }
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1000000) throw FormatError("bad PPM header in '" + path + "'");
        c = in.get();
    }
    return value;
}

ImageRGB load_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    const bool rgb = (m1 == '6');
    if (m0 != 'P' || (m1 != '6' && m1 != '5')) {
        throw FormatError("bad PPM magic in '" + path + "'");
    }
    const int w = ppm_token(in, path);
    const int h = ppm_token(in, path);
    const int maxval = ppm_token(in, path);
    if (w < 1 || h < 1) throw FormatError("bad PPM dimensions in '" + path + "'");
    if (maxval <= 0 || maxval > 255) throw FormatError("unsupported PPM maxval in '" + path + "'");
    // header parsing consumed the single whitespace byte before the raster
    ImageRGB out(w, h);
    const std::size_t n = out.pixels();
    if (rgb) {
        in.read(reinterpret_cast<char*>(out.data.data()), static_cast<std::streamsize>(3 * n));
    } else {
        std::vector<std::uint8_t> gray(n);
        in.read(reinterpret_cast<char*>(gray.data()), static_cast<std::streamsize>(n));
        for (std::size_t i = 0; i < n; ++i) {
            out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = gray[i];
        }
    }
    if (!in) throw FormatError("truncated PPM raster in '" + path + "'");
    return out;
}

void write_png_impl(png_image& image, const void* buffer, const std::string& path) {
    if (!png_image_write_to_file(&image, path.c_str(), 0, buffer, 0, nullptr)) {
        throw IoError("cannot write PNG '" + path + "': " + image.message);
    }
}

}  // namespace

ImageRGB load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open '" + path + "'");
    unsigned char magic[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(magic), 2);
    probe.close();
    if (magic[0] == 0x89 && magic[1] == 'P') return load_png(path);
    if (magic[0] == 'P' && (magic[1] == '6' || magic[1] == '5')) return load_ppm(path);
    throw FormatError("unsupported image format in '" + path + "'");
}

void write_saliency_map(const SaliencyMap& map, const std::string& path) {
    std::vector<std::uint8_t> gray(map.values.size());
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const double v = std::clamp(map.values[i], 0.0, 1.0);
        gray[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(map.width);
    image.height = static_cast<png_uint_32>(map.height);
    image.format = PNG_FORMAT_GRAY;
    write_png_impl(image, gray.data(), path);
}

void write_rgb_png(const ImageRGB& img, const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = PNG_FORMAT_RGB;
    write_png_impl(image, img.data.data(), path);
}

SaliencyMap load_saliency_map(const std::string& path) {
    const ImageRGB img = load_image(path);
    SaliencyMap map(img.width, img.height);
    const std::size_t n = img.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const int sum = img.data[3 * i] + img.data[3 * i + 1] + img.data[3 * i + 2];
        map.values[i] = sum / (3.0 * 255.0);
    }
    return map;
}

BinaryMask load_mask(const std::string& path) {
    const ImageRGB img = load_image(path);
    BinaryMask mask(img.width, img.height);
    const std::size_t n = img.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const int sum = img.data[3 * i] + img.data[3 * i + 1] + img.data[3 * i + 2];
        mask.values[i] = (sum >= 3 * 128) ? 1 : 0;
    }
    return mask;
}

}  // namespace hisal
