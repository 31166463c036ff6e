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

#include "hisal/scale_merge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "hisal/color.hpp"
#include "hisal/error.hpp"

namespace hisal {

namespace {

struct Bbox {
    int x0 = std::numeric_limits<int>::max();
    int y0 = std::numeric_limits<int>::max();
    int x1 = -1;
    int y1 = -1;
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

std::vector<Bbox> region_bboxes(const LabelMap& map) {
    std::vector<Bbox> boxes(static_cast<std::size_t>(map.regionCount));
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            Bbox& b = boxes[map.at(x, y)];
            b.x0 = std::min(b.x0, x);
            b.y0 = std::min(b.y0, y);
            b.x1 = std::max(b.x1, x);
            b.y1 = std::max(b.y1, y);
        }
    }
    return boxes;
}

// Integral image of the region indicator over its bounding box.
// integral[(y+1)*(bw+1) + (x+1)] counts region pixels in box rows [0,y],
// cols [0,x] (box-local coordinates).
std::vector<long long> region_integral(const LabelMap& map, int id, const Bbox& b) {
    const int bw = b.width(), bh = b.height();
    std::vector<long long> integral(static_cast<std::size_t>(bw + 1) * (bh + 1), 0);
    for (int y = 0; y < bh; ++y) {
        for (int x = 0; x < bw; ++x) {
            const long long in = map.at(b.x0 + x, b.y0 + y) == id ? 1 : 0;
            integral[static_cast<std::size_t>(y + 1) * (bw + 1) + (x + 1)] =
                in + integral[static_cast<std::size_t>(y) * (bw + 1) + (x + 1)] +
                integral[static_cast<std::size_t>(y + 1) * (bw + 1) + x] -
                integral[static_cast<std::size_t>(y) * (bw + 1) + x];
        }
    }
    return integral;
}

// True when some t-by-t window inside the bounding box is covered entirely
// by the region.
bool has_full_square(const std::vector<long long>& integral, int bw, int bh, int t) {
    if (t > bw || t > bh) return false;
    const long long want = static_cast<long long>(t) * t;
    for (int y = 0; y + t <= bh; ++y) {
        for (int x = 0; x + t <= bw; ++x) {
            const long long sum =
                integral[static_cast<std::size_t>(y + t) * (bw + 1) + (x + t)] -
                integral[static_cast<std::size_t>(y) * (bw + 1) + (x + t)] -
                integral[static_cast<std::size_t>(y + t) * (bw + 1) + x] +
                integral[static_cast<std::size_t>(y) * (bw + 1) + x];
            if (sum == want) return true;
        }
    }
    return false;
}

double color_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::sqrt(color_dist_sq(a, b));
}

int resolve(std::vector<int>& rep, int id) {
    int root = id;
    while (rep[root] != root) root = rep[root];
    while (rep[id] != root) {
        const int next = rep[id];
        rep[id] = root;
        id = next;
    }
    return root;
}

}  // namespace

std::vector<int> rescale_thresholds(const std::vector<int>& base, int width, int height) {
    if (width < 1 || height < 1) throw std::invalid_argument("rescale_thresholds: empty image");
    const double factor =
        std::sqrt(static_cast<double>(width) * height /
                  (static_cast<double>(ScaleThresholds::kReferenceWidth) *
                   ScaleThresholds::kReferenceHeight));
    std::vector<int> out;
    out.reserve(base.size());
    for (int t : base) {
        if (t < 1) throw std::invalid_argument("rescale_thresholds: threshold < 1");
        const double scaled = t * factor;
        const int odd = 2 * static_cast<int>(std::lround((scaled - 1.0) / 2.0)) + 1;
        out.push_back(std::max(3, odd));
    }
    return out;
}

std::vector<int> compute_all_scales(const LabelMap& map) {
    const int w = map.width, h = map.height;
    std::vector<int> scales(static_cast<std::size_t>(map.regionCount), 0);
    // side[y*w+x] is the side of the largest same-label square whose
    // top-left corner sits at (x, y), built bottom-up from the three
    // neighbors below and to the right.
    std::vector<int> side(static_cast<std::size_t>(w) * h, 0);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = w - 1; x >= 0; --x) {
            const std::int32_t lab = map.at(x, y);
            int s = 1;
            if (x + 1 < w && y + 1 < h && map.at(x + 1, y) == lab &&
                map.at(x, y + 1) == lab && map.at(x + 1, y + 1) == lab) {
                s = 1 + std::min({side[static_cast<std::size_t>(y) * w + (x + 1)],
                                  side[static_cast<std::size_t>(y + 1) * w + x],
                                  side[static_cast<std::size_t>(y + 1) * w + (x + 1)]});
            }
            side[static_cast<std::size_t>(y) * w + x] = s;
            scales[lab] = std::max(scales[lab], s);
        }
    }
    return scales;
}

int region_scale(const LabelMap& map, const Region& region) {
    if (region.pixelCount < 1) throw std::invalid_argument("region_scale: empty region");
    Bbox box;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            if (map.at(x, y) == region.id) {
                box.x0 = std::min(box.x0, x);
                box.y0 = std::min(box.y0, y);
                box.x1 = std::max(box.x1, x);
                box.y1 = std::max(box.y1, y);
            }
        }
    }
    if (box.x1 < 0) throw std::invalid_argument("region_scale: id absent from map");
    const std::vector<long long> integral = region_integral(map, region.id, box);
    const int bw = box.width(), bh = box.height();
    int lo = 1, hi = std::min(bw, bh);
    while (lo < hi) {
        const int mid = lo + (hi - lo + 1) / 2;
        if (has_full_square(integral, bw, bh, mid)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

std::set<int> scale_below(const LabelMap& map, const std::vector<Region>& regions, int t) {
    if (t < 1) throw std::invalid_argument("scale_below: t < 1");
    const std::vector<Bbox> boxes = region_bboxes(map);
    std::set<int> out;
    for (const Region& r : regions) {
        const Bbox& b = boxes[r.id];
        if (b.x1 < 0) continue;
        if (b.width() < t || b.height() < t) {
            out.insert(r.id);
            continue;
        }
        const std::vector<long long> integral = region_integral(map, r.id, b);
        if (!has_full_square(integral, b.width(), b.height(), t)) out.insert(r.id);
    }
    return out;
}

long long pixel_count_scale(const LabelMap& map, const Region& region) {
    (void)map;
    if (region.pixelCount < 1) throw std::invalid_argument("pixel_count_scale: empty region");
    return region.pixelCount;
}

std::pair<LabelMap, std::vector<Region>> merge_regions(const LabelMap& map,
                                                       const std::vector<Region>& regions,
                                                       int t,
                                                       const MergeOptions& opts) {
    if (t < 1) throw std::invalid_argument("merge_regions: t < 1");
    const int n = map.regionCount;

    LabelMap work = map;
    std::vector<Region> reg = regions;
    std::vector<int> rep(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rep[i] = i;

    const long long need =
        opts.measure == ScaleMeasure::kPixels ? static_cast<long long>(t) * t : t;

    struct Deficient {
        long long metric;
        int id;
    };

    while (true) {
        // Bring the raster up to date with the merges of the previous pass,
        // then refresh scales; metric updates are deliberately held back to
        // pass boundaries.
        for (std::int32_t& lab : work.labels) lab = resolve(rep, lab);
        const std::vector<int> scales = compute_all_scales(work);
        std::vector<Deficient> deficient;
        for (int i = 0; i < n; ++i) {
            if (rep[i] != i) continue;
            reg[i].scale = scales[i];
            const long long metric =
                opts.measure == ScaleMeasure::kPixels ? reg[i].pixelCount
                                                      : static_cast<long long>(scales[i]);
            if (metric < need) deficient.push_back({metric, i});
        }
        if (deficient.empty()) break;
        std::sort(deficient.begin(), deficient.end(), [](const Deficient& a, const Deficient& b) {
            if (a.metric != b.metric) return a.metric < b.metric;
            return a.id < b.id;
        });

        int merges = 0;
        std::vector<char> grew(static_cast<std::size_t>(n), 0);
        for (const Deficient& d : deficient) {
            const int i = resolve(rep, d.id);
            if (i != d.id) continue;  // absorbed earlier this pass
            // A region that absorbed others no longer matches its screening
            // metric; it waits for the next pass.
            if (grew[i]) continue;

            int best = -1;
            double bestDist = std::numeric_limits<double>::infinity();
            for (int raw : reg[i].neighbors) {
                const int j = resolve(rep, raw);
                if (j == i) continue;
                const double dist = color_distance(reg[i].meanColor, reg[j].meanColor);
                if (dist < bestDist || (dist == bestDist && j < best)) {
                    bestDist = dist;
                    best = j;
                }
            }
            if (best < 0) continue;  // isolated region, nothing to merge into

            Region& a = reg[i];
            Region& b = reg[best];
            const long long total = a.pixelCount + b.pixelCount;
            b.cx = (a.cx * a.pixelCount + b.cx * b.pixelCount) / total;
            b.cy = (a.cy * a.pixelCount + b.cy * b.pixelCount) / total;
            for (int c = 0; c < 3; ++c) {
                b.meanColor[c] = opts.weightedColor
                                     ? (a.meanColor[c] * a.pixelCount +
                                        b.meanColor[c] * b.pixelCount) /
                                           total
                                     : 0.5 * (a.meanColor[c] + b.meanColor[c]);
            }
            b.pixelCount = total;
            b.neighbors.insert(a.neighbors.begin(), a.neighbors.end());
            rep[i] = best;
            grew[best] = 1;
            ++merges;
        }
        if (merges == 0) break;  // only isolated undersized regions remain
    }

    // Compact to dense labels in ascending survivor order.
    std::vector<int> dense(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (resolve(rep, i) == i) dense[i] = next++;
    }
    LabelMap out(map.width, map.height);
    out.regionCount = next;
    for (std::size_t p = 0; p < work.labels.size(); ++p) {
        out.labels[p] = dense[resolve(rep, work.labels[p])];
    }

    std::vector<Region> outRegions(static_cast<std::size_t>(next));
    for (int i = 0; i < n; ++i) {
        if (dense[i] < 0) continue;
        Region& r = outRegions[dense[i]];
        r.id = dense[i];
        r.pixelCount = reg[i].pixelCount;
        r.meanColor = reg[i].meanColor;
        r.cx = reg[i].cx;
        r.cy = reg[i].cy;
    }
    const std::vector<int> finalScales = compute_all_scales(out);
    for (Region& r : outRegions) r.scale = finalScales[r.id];
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const std::int32_t lab = out.at(x, y);
            if (x + 1 < out.width) {
                const std::int32_t rl = out.at(x + 1, y);
                if (rl != lab) {
                    outRegions[lab].neighbors.insert(rl);
                    outRegions[rl].neighbors.insert(lab);
                }
            }
            if (y + 1 < out.height) {
                const std::int32_t dl = out.at(x, y + 1);
                if (dl != lab) {
                    outRegions[lab].neighbors.insert(dl);
                    outRegions[dl].neighbors.insert(lab);
                }
            }
        }
    }
    return {std::move(out), std::move(outRegions)};
}

LayerHierarchy extract_layers(const LabelMap& map,
                              const std::vector<Region>& regions,
                              const ScaleThresholds& thresholds,
                              const MergeOptions& opts) {
    if (thresholds.perLayer.empty()) {
        throw std::invalid_argument("extract_layers: no thresholds");
    }
    for (std::size_t i = 1; i < thresholds.perLayer.size(); ++i) {
        if (thresholds.perLayer[i] <= thresholds.perLayer[i - 1]) {
            throw std::invalid_argument("extract_layers: thresholds not increasing");
        }
    }
    const std::vector<int> effective =
        rescale_thresholds(thresholds.perLayer, map.width, map.height);

    LayerHierarchy hierarchy;
    const LabelMap* curMap = &map;
    const std::vector<Region>* curRegions = &regions;
    for (int tEff : effective) {
        auto [nextMap, nextRegions] = merge_regions(*curMap, *curRegions, tEff, opts);
        hierarchy.layers.push_back({std::move(nextMap), std::move(nextRegions), {}});
        curMap = &hierarchy.layers.back().labels;
        curRegions = &hierarchy.layers.back().regions;
    }
    for (std::size_t k = 0; k + 1 < hierarchy.layers.size(); ++k) {
        Layer& lo = hierarchy.layers[k];
        const Layer& hi = hierarchy.layers[k + 1];
        lo.parent.assign(static_cast<std::size_t>(lo.labels.regionCount), -1);
        for (std::size_t p = 0; p < lo.labels.labels.size(); ++p) {
            lo.parent[lo.labels.labels[p]] = hi.labels.labels[p];
        }
    }
    return hierarchy;
}

bool verify_nesting(const LayerHierarchy& hierarchy) {
    for (std::size_t k = 0; k + 1 < hierarchy.layers.size(); ++k) {
        const Layer& lo = hierarchy.layers[k];
        const Layer& hi = hierarchy.layers[k + 1];
        if (hi.labels.regionCount > lo.labels.regionCount) return false;
        if (lo.parent.size() != static_cast<std::size_t>(lo.labels.regionCount)) return false;
        if (lo.labels.labels.size() != hi.labels.labels.size()) return false;
        for (std::size_t p = 0; p < lo.labels.labels.size(); ++p) {
            const int parent = lo.parent[lo.labels.labels[p]];
            if (parent < 0 || parent != hi.labels.labels[p]) return false;
        }
    }
    return true;
}

}  // namespace hisal
