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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>

#include "doctest.h"
#include "hisal/error.hpp"
#include "hisal/image_io.hpp"
#include "test_util.hpp"

using namespace hisal;
using testutil::TempDir;

TEST_SUITE("image_io") {

TEST_CASE("RGB PNG round trip is byte exact") {
    TempDir dir("io_rgb");
    ImageRGB img(7, 5);
    std::mt19937_64 rng(42);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(rng());
    write_rgb_png(img, dir.str("img.png"));
    const ImageRGB back = load_image(dir.str("img.png"));
    REQUIRE(back.width == 7);
    REQUIRE(back.height == 5);
    CHECK(back.data == img.data);
}

TEST_CASE("saliency write uses round-half-up 8-bit quantization") {
    TempDir dir("io_sal");
    SaliencyMap map(3, 1);
    map.at(0, 0) = 0.0;
    map.at(1, 0) = 0.5;  // 127.5 rounds up to 128
    map.at(2, 0) = 1.0;
    write_saliency_map(map, dir.str("map.png"));
    const ImageRGB raw = load_image(dir.str("map.png"));
    CHECK(raw.px(0, 0)[0] == 0);
    CHECK(raw.px(1, 0)[0] == 128);
    CHECK(raw.px(2, 0)[0] == 255);
    // Grayscale PNG decodes with replicated channels.
    CHECK(raw.px(1, 0)[1] == 128);
    CHECK(raw.px(1, 0)[2] == 128);
}

TEST_CASE("saliency round trip stays within one quantization step") {
    TempDir dir("io_rt");
    SaliencyMap map(16, 9);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& v : map.values) v = u(rng);
    write_saliency_map(map, dir.str("m.png"));
    const SaliencyMap back = load_saliency_map(dir.str("m.png"));
    REQUIRE(back.width == map.width);
    REQUIRE(back.height == map.height);
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        CHECK(std::abs(back.values[i] - map.values[i]) <= 1.0 / 255.0 + 1e-12);
    }
}

TEST_CASE("binary PPM decodes") {
    TempDir dir("io_ppm");
    std::ofstream out(dir.str("two.ppm"), std::ios::binary);
    out << "P6\n2 1\n255\n";
    const unsigned char px[6] = {255, 0, 0, 0, 0, 255};
    out.write(reinterpret_cast<const char*>(px), 6);
    out.close();
    const ImageRGB img = load_image(dir.str("two.ppm"));
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 1);
    CHECK(img.px(0, 0)[0] == 255);
    CHECK(img.px(1, 0)[2] == 255);
}

TEST_CASE("binary PGM replicates gray into three channels") {
    TempDir dir("io_pgm");
    std::ofstream out(dir.str("g.pgm"), std::ios::binary);
    out << "P5\n2 2\n255\n";
    const unsigned char px[4] = {0, 64, 128, 255};
    out.write(reinterpret_cast<const char*>(px), 4);
    out.close();
    const ImageRGB img = load_image(dir.str("g.pgm"));
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    CHECK(img.px(1, 0)[0] == 64);
    CHECK(img.px(1, 0)[1] == 64);
    CHECK(img.px(1, 0)[2] == 64);
}

TEST_CASE("mask loading thresholds at mean channel value 128") {
    TempDir dir("io_mask");
    ImageRGB img(3, 1);
    img.px(0, 0)[0] = img.px(0, 0)[1] = img.px(0, 0)[2] = 0;
    img.px(1, 0)[0] = img.px(1, 0)[1] = img.px(1, 0)[2] = 127;
    img.px(2, 0)[0] = img.px(2, 0)[1] = img.px(2, 0)[2] = 255;
    write_rgb_png(img, dir.str("m.png"));
    const BinaryMask mask = load_mask(dir.str("m.png"));
    CHECK(mask.at(0, 0) == 0);
    CHECK(mask.at(1, 0) == 0);
    CHECK(mask.at(2, 0) == 1);
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(load_image("/nonexistent/path/img.png"), IoError);
}

TEST_CASE("garbage content raises FormatError") {
    TempDir dir("io_bad");
    std::ofstream out(dir.str("junk.png"), std::ios::binary);
    out << "this is not an image at all";
    out.close();
    CHECK_THROWS_AS(load_image(dir.str("junk.png")), FormatError);
}

TEST_CASE("unwritable path raises IoError") {
    SaliencyMap map(2, 2);
    CHECK_THROWS_AS(write_saliency_map(map, "/nonexistent/dir/map.png"), IoError);
}

}  // TEST_SUITE
