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

#include <algorithm>
#include <queue>
#include <vector>

#include "doctest.h"
#include "hisal/color.hpp"
#include "hisal/segmentation.hpp"
#include "test_util.hpp"

using namespace hisal;

namespace {

// Partition check plus 4-connectivity of every region via flood fill.
void check_partition_and_connectivity(const LabelMap& map) {
    REQUIRE(map.regionCount >= 1);
    std::vector<long long> counts(static_cast<std::size_t>(map.regionCount), 0);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const int label = map.at(x, y);
            REQUIRE(label >= 0);
            REQUIRE(label < map.regionCount);
            ++counts[static_cast<std::size_t>(label)];
        }
    }
    for (long long c : counts) CHECK(c >= 1);

    std::vector<char> seen(static_cast<std::size_t>(map.width) * map.height, 0);
    int components = 0;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            if (seen[static_cast<std::size_t>(y) * map.width + x]) continue;
            ++components;
            const int label = map.at(x, y);
            std::queue<std::pair<int, int>> q;
            q.push({x, y});
            seen[static_cast<std::size_t>(y) * map.width + x] = 1;
            while (!q.empty()) {
                const auto [cx, cy] = q.front();
                q.pop();
                const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    const int nx = cx + dx[d], ny = cy + dy[d];
                    if (nx < 0 || ny < 0 || nx >= map.width || ny >= map.height) continue;
                    if (seen[static_cast<std::size_t>(ny) * map.width + nx]) continue;
                    if (map.at(nx, ny) != label) continue;
                    seen[static_cast<std::size_t>(ny) * map.width + nx] = 1;
                    q.push({nx, ny});
                }
            }
        }
    }
    // One flood component per label means every region is 4-connected.
    CHECK(components == map.regionCount);
}

ImageLuv two_tone_halves(int w, int h) {
    ImageRGB rgb(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint8_t v = (x < w / 2) ? 40 : 200;
            rgb.px(x, y)[0] = rgb.px(x, y)[1] = rgb.px(x, y)[2] = v;
        }
    }
    return to_cieluv(rgb);
}

}  // namespace

TEST_SUITE("segmentation") {

TEST_CASE("constant image yields exactly one region") {
    ImageRGB rgb(20, 15);
    for (auto& b : rgb.data) b = 90;
    const auto [map, regions] = watershed_oversegment(to_cieluv(rgb));
    CHECK(map.regionCount == 1);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].pixelCount == 20 * 15);
    CHECK(regions[0].cx == doctest::Approx(0.5));
    CHECK(regions[0].cy == doctest::Approx(0.5));
    CHECK(regions[0].neighbors.empty());
}

TEST_CASE("two flat halves become exactly two regions split at the edge") {
    const auto [map, regions] = watershed_oversegment(two_tone_halves(32, 16));
    CHECK(map.regionCount == 2);
    // Flood-derived oracle: away from the edge column the label must be
    // constant per side.
    const int left = map.at(1, 8), right = map.at(30, 8);
    CHECK(left != right);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 13; ++x) CHECK(map.at(x, y) == left);
        for (int x = 19; x < 32; ++x) CHECK(map.at(x, y) == right);
    }
}

TEST_CASE("watershed output is a partition of 4-connected regions") {
    ImageRGB rgb(48, 36);
    std::mt19937_64 rng(11);
    for (auto& b : rgb.data) b = static_cast<std::uint8_t>(rng());
    const auto [map, regions] = watershed_oversegment(to_cieluv(rgb));
    CHECK(map.regionCount == static_cast<int>(regions.size()));
    check_partition_and_connectivity(map);
}

TEST_CASE("watershed is deterministic") {
    ImageRGB rgb(40, 30);
    std::mt19937_64 rng(5);
    for (auto& b : rgb.data) b = static_cast<std::uint8_t>(rng());
    const auto [a, ra] = watershed_oversegment(to_cieluv(rgb));
    const auto [b, rb] = watershed_oversegment(to_cieluv(rgb));
    CHECK(a.labels == b.labels);
    CHECK(ra.size() == rb.size());
}

TEST_CASE("compute_regions reproduces counts, centroids, colors, adjacency") {
    const LabelMap map = testutil::label_map_from_ascii({
        "0011",
        "0011",
        "2211",
    });
    ImageRGB rgb(4, 3);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 4; ++x) {
            const std::uint8_t v = static_cast<std::uint8_t>(40 + 60 * map.at(x, y));
            rgb.px(x, y)[0] = rgb.px(x, y)[1] = rgb.px(x, y)[2] = v;
        }
    }
    const ImageLuv luv = to_cieluv(rgb);
    const auto regions = compute_regions(map, &luv);
    REQUIRE(regions.size() == 3);

    CHECK(regions[0].pixelCount == 4);
    CHECK(regions[1].pixelCount == 6);
    CHECK(regions[2].pixelCount == 2);

    // Pixel-center centroid of region 2 = mean of (0.5,2.5),(1.5,2.5)
    // normalized by 4x3.
    CHECK(regions[2].cx == doctest::Approx(1.0 / 4.0));
    CHECK(regions[2].cy == doctest::Approx(2.5 / 3.0));

    // Region mean color equals the per-pixel mean (all pixels share one
    // color here).
    const auto ref = rgb_to_luv(40, 40, 40);
    CHECK(regions[0].meanColor[0] == doctest::Approx(ref[0]).epsilon(1e-9));

    // Adjacency is symmetric, no self loops.
    for (const Region& r : regions) {
        CHECK(r.neighbors.count(r.id) == 0);
        for (int nb : r.neighbors) {
            CHECK(regions[static_cast<std::size_t>(nb)].neighbors.count(r.id) == 1);
        }
    }
    CHECK(regions[0].neighbors == std::set<int>{1, 2});
    CHECK(regions[2].neighbors == std::set<int>{0, 1});
}

TEST_CASE("region pixel counts always sum to the image area") {
    ImageRGB rgb(37, 23);
    std::mt19937_64 rng(3);
    for (auto& b : rgb.data) b = static_cast<std::uint8_t>(rng());
    const auto [map, regions] = watershed_oversegment(to_cieluv(rgb));
    long long total = 0;
    for (const Region& r : regions) total += r.pixelCount;
    CHECK(total == 37LL * 23LL);
}

TEST_CASE("label_map_to_rgb renders one color per label") {
    const LabelMap map = testutil::label_map_from_ascii({"01", "23"});
    const ImageRGB img = label_map_to_rgb(map);
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    // Distinct labels get distinct pseudo-random colors.
    auto pix = [&](int x, int y) {
        return std::array<std::uint8_t, 3>{img.px(x, y)[0], img.px(x, y)[1], img.px(x, y)[2]};
    };
    CHECK(pix(0, 0) != pix(1, 0));
    CHECK(pix(0, 0) != pix(0, 1));
}

}  // TEST_SUITE
