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

#include "hisal/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>

#include "hisal/error.hpp"

namespace hisal {

namespace {

// Euclidean norm of per-channel central differences, clamped at borders.
std::vector<double> gradient_magnitude(const ImageLuv& img) {
    const int w = img.width, h = img.height;
    std::vector<double> g(static_cast<std::size_t>(w) * h, 0.0);
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
            double sum = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double gx = (img.px(xp, y)[c] - img.px(xm, y)[c]) * 0.5;
                const double gy = (img.px(x, yp)[c] - img.px(x, ym)[c]) * 0.5;
                sum += gx * gx + gy * gy;
            }
            g[static_cast<std::size_t>(y) * w + x] = std::sqrt(sum);
        }
    }
    return g;
}

std::vector<double> mean_filter_3x3(const std::vector<double>& in, int w, int h) {
    std::vector<double> out(in.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    sum += in[static_cast<std::size_t>(yy) * w + xx];
                }
            }
            out[static_cast<std::size_t>(y) * w + x] = sum / 9.0;
        }
    }
    return out;
}

std::vector<int> quantize256(const std::vector<double>& g) {
    double maxg = 0.0;
    for (double v : g) maxg = std::max(maxg, v);
    std::vector<int> q(g.size(), 0);
    if (maxg <= 0.0) return q;
    for (std::size_t i = 0; i < g.size(); ++i) {
        q[i] = static_cast<int>(std::lround(255.0 * g[i] / maxg));
    }
    return q;
}

struct FloodItem {
    int level;
    std::uint32_t seq;
    int idx;
    bool operator>(const FloodItem& o) const {
        if (level != o.level) return level > o.level;
        return seq > o.seq;
    }
};

}  // namespace

std::pair<LabelMap, std::vector<Region>> watershed_oversegment(const ImageLuv& img) {
    const int w = img.width, h = img.height;
    if (w < 1 || h < 1) throw DegenerateInputError("watershed on empty image");
    const std::size_t n = static_cast<std::size_t>(w) * h;

    const std::vector<int> q = quantize256(mean_filter_3x3(gradient_magnitude(img), w, h));

    LabelMap map(w, h);
    std::fill(map.labels.begin(), map.labels.end(), -1);

    const int dx4[4] = {1, -1, 0, 0};
    const int dy4[4] = {0, 0, 1, -1};

    // Markers: regional minima plateaus of q under 4-connectivity,
    // discovered in scanline order.
    int markers = 0;
    std::vector<std::uint8_t> visited(n, 0);
    std::vector<int> plateau;
    std::vector<int> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (visited[start]) continue;
        const int level = q[start];
        bool isMin = true;
        plateau.clear();
        stack.clear();
        stack.push_back(static_cast<int>(start));
        visited[start] = 1;
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            plateau.push_back(p);
            const int px = p % w, py = p / w;
            for (int d = 0; d < 4; ++d) {
                const int nx = px + dx4[d], ny = py + dy4[d];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const int np = ny * w + nx;
                if (q[np] < level) {
                    isMin = false;
                } else if (q[np] == level && !visited[np]) {
                    visited[np] = 1;
                    stack.push_back(np);
                }
            }
        }
        if (isMin) {
            for (int p : plateau) map.labels[p] = markers;
            ++markers;
        }
    }

    // Flood from the markers, lowest quantized gradient first; equal levels
    // pop in insertion order. A pixel takes the label of whichever basin
    // reaches it first, so ridge pixels join a basin and the partition is
    // total.
    std::priority_queue<FloodItem, std::vector<FloodItem>, std::greater<FloodItem>> pq;
    std::uint32_t seq = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (map.labels[p] >= 0) pq.push({q[p], seq++, static_cast<int>(p)});
    }
    while (!pq.empty()) {
        const FloodItem it = pq.top();
        pq.pop();
        const int p = it.idx;
        const int px = p % w, py = p / w;
        const std::int32_t lab = map.labels[p];
        for (int d = 0; d < 4; ++d) {
            const int nx = px + dx4[d], ny = py + dy4[d];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const int np = ny * w + nx;
            if (map.labels[np] < 0) {
                map.labels[np] = lab;
                pq.push({q[np], seq++, np});
            }
        }
    }

    map.regionCount = markers;
    return {std::move(map), compute_regions(map, &img)};
}

std::vector<Region> compute_regions(const LabelMap& map, const ImageLuv* luv) {
    const int w = map.width, h = map.height;
    std::vector<Region> regions(static_cast<std::size_t>(map.regionCount));
    for (int i = 0; i < map.regionCount; ++i) regions[i].id = i;

    std::vector<std::array<double, 3>> colorSum(regions.size(), {0.0, 0.0, 0.0});
    std::vector<double> sx(regions.size(), 0.0), sy(regions.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::int32_t lab = map.at(x, y);
            Region& r = regions[lab];
            r.pixelCount += 1;
            sx[lab] += (x + 0.5) / w;
            sy[lab] += (y + 0.5) / h;
            if (luv) {
                const double* px = luv->px(x, y);
                colorSum[lab][0] += px[0];
                colorSum[lab][1] += px[1];
                colorSum[lab][2] += px[2];
            }
            if (x + 1 < w) {
                const std::int32_t rlab = map.at(x + 1, y);
                if (rlab != lab) {
                    regions[lab].neighbors.insert(rlab);
                    regions[rlab].neighbors.insert(lab);
                }
            }
            if (y + 1 < h) {
                const std::int32_t dlab = map.at(x, y + 1);
                if (dlab != lab) {
                    regions[lab].neighbors.insert(dlab);
                    regions[dlab].neighbors.insert(lab);
                }
            }
        }
    }
    for (Region& r : regions) {
        if (r.pixelCount > 0) {
            r.cx = sx[r.id] / r.pixelCount;
            r.cy = sy[r.id] / r.pixelCount;
            if (luv) {
                r.meanColor = {colorSum[r.id][0] / r.pixelCount,
                               colorSum[r.id][1] / r.pixelCount,
                               colorSum[r.id][2] / r.pixelCount};
            }
        }
    }
    return regions;
}

ImageRGB label_map_to_rgb(const LabelMap& map) {
    ImageRGB out(map.width, map.height);
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        // splitmix64 of the label, so colors are stable across runs
        std::uint64_t z = static_cast<std::uint64_t>(map.labels[i]) + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        out.data[3 * i] = static_cast<std::uint8_t>(z & 0xff);
        out.data[3 * i + 1] = static_cast<std::uint8_t>((z >> 8) & 0xff);
        out.data[3 * i + 2] = static_cast<std::uint8_t>((z >> 16) & 0xff);
    }
    return out;
}

}  // namespace hisal
