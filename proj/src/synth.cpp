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

#include "hisal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "hisal/error.hpp"

namespace hisal {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void validate(const SynthSpec& s) {
    if (s.width < 1 || s.height < 1) throw std::invalid_argument("synth: empty canvas");
    if (s.background == BackgroundKind::kCheckerboard) {
        if (s.tile < 2) throw std::invalid_argument("synth: tile < 2");
        if (s.groutWidth < 0 || s.groutWidth >= s.tile) {
            throw std::invalid_argument("synth: grout width outside [0, tile)");
        }
    }
    if (s.background == BackgroundKind::kNoise && s.noiseAmplitude < 0) {
        throw std::invalid_argument("synth: negative noise amplitude");
    }
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    switch (s.object) {
        case ObjectKind::kDisk:
            x0 = s.cx - s.size;
            x1 = s.cx + s.size;
            y0 = s.cy - s.size;
            y1 = s.cy + s.size;
            if (s.size <= 0) throw std::invalid_argument("synth: disk radius <= 0");
            break;
        case ObjectKind::kRectangle:
            x0 = s.cx - s.size / 2;
            x1 = s.cx + s.size / 2;
            y0 = s.cy - s.sizeB / 2;
            y1 = s.cy + s.sizeB / 2;
            if (s.size <= 0 || s.sizeB <= 0) {
                throw std::invalid_argument("synth: rectangle sides <= 0");
            }
            break;
        case ObjectKind::kRing:
            x0 = s.cx - s.size;
            x1 = s.cx + s.size;
            y0 = s.cy - s.size;
            y1 = s.cy + s.size;
            if (s.sizeB <= 0 || s.sizeB >= s.size) {
                throw std::invalid_argument("synth: ring radii need 0 < inner < outer");
            }
            break;
    }
    if (x0 < 0 || y0 < 0 || x1 > s.width || y1 > s.height) {
        throw std::invalid_argument("synth: object out of bounds");
    }
}

bool inside_object(const SynthSpec& s, int x, int y) {
    const double px = x + 0.5 - s.cx;
    const double py = y + 0.5 - s.cy;
    switch (s.object) {
        case ObjectKind::kDisk:
            return px * px + py * py <= s.size * s.size;
        case ObjectKind::kRectangle:
            return std::abs(px) <= s.size / 2 && std::abs(py) <= s.sizeB / 2;
        case ObjectKind::kRing: {
            const double d2 = px * px + py * py;
            return d2 <= s.size * s.size && d2 >= s.sizeB * s.sizeB;
        }
    }
    return false;
}

std::array<std::uint8_t, 3> background_at(const SynthSpec& s, int x, int y) {
    switch (s.background) {
        case BackgroundKind::kFlat:
            return s.bgColor;
        case BackgroundKind::kCheckerboard:
            if (s.groutWidth > 0 && (x % s.tile < s.groutWidth || y % s.tile < s.groutWidth)) {
                return s.groutColor;
            }
            return ((x / s.tile + y / s.tile) % 2 == 0) ? s.bgColor : s.bgColorB;
        case BackgroundKind::kNoise: {
            std::array<std::uint8_t, 3> out;
            const std::uint64_t base =
                s.seed * 1000003ULL + (static_cast<std::uint64_t>(y) * s.width + x) * 3ULL;
            for (int c = 0; c < 3; ++c) {
                const int span = 2 * s.noiseAmplitude + 1;
                const int offset =
                    static_cast<int>(splitmix64(base + c) % static_cast<std::uint64_t>(span)) -
                    s.noiseAmplitude;
                out[c] = static_cast<std::uint8_t>(std::clamp(s.bgColor[c] + offset, 0, 255));
            }
            return out;
        }
    }
    return s.bgColor;
}

const char* background_name(BackgroundKind k) {
    switch (k) {
        case BackgroundKind::kFlat: return "flat";
        case BackgroundKind::kCheckerboard: return "checker";
        case BackgroundKind::kNoise: return "noise";
    }
    return "flat";
}

const char* object_name(ObjectKind k) {
    switch (k) {
        case ObjectKind::kDisk: return "disk";
        case ObjectKind::kRectangle: return "rect";
        case ObjectKind::kRing: return "ring";
    }
    return "disk";
}

BackgroundKind background_from_name(const std::string& name) {
    if (name == "flat") return BackgroundKind::kFlat;
    if (name == "checker") return BackgroundKind::kCheckerboard;
    if (name == "noise") return BackgroundKind::kNoise;
    throw std::invalid_argument("synth: unknown background '" + name + "'");
}

ObjectKind object_from_name(const std::string& name) {
    if (name == "disk") return ObjectKind::kDisk;
    if (name == "rect") return ObjectKind::kRectangle;
    if (name == "ring") return ObjectKind::kRing;
    throw std::invalid_argument("synth: unknown object '" + name + "'");
}

nlohmann::json color_json(const std::array<std::uint8_t, 3>& c) {
    return nlohmann::json::array({c[0], c[1], c[2]});
}

std::array<std::uint8_t, 3> color_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("synth: color needs 3 values");
    std::array<std::uint8_t, 3> out;
    for (int c = 0; c < 3; ++c) {
        const int v = j[c].get<int>();
        if (v < 0 || v > 255) throw std::invalid_argument("synth: color channel outside 8 bit");
        out[c] = static_cast<std::uint8_t>(v);
    }
    return out;
}

SynthSpec spec_from_json_obj(const nlohmann::json& j) {
    SynthSpec s;
    if (!j.is_object()) throw std::invalid_argument("synth: spec must be an object");
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("width")) s.width = j.at("width").get<int>();
    if (j.contains("height")) s.height = j.at("height").get<int>();
    if (j.contains("background")) {
        s.background = background_from_name(j.at("background").get<std::string>());
    }
    if (j.contains("bgColor")) s.bgColor = color_from_json(j.at("bgColor"));
    if (j.contains("bgColorB")) s.bgColorB = color_from_json(j.at("bgColorB"));
    if (j.contains("tile")) s.tile = j.at("tile").get<int>();
    if (j.contains("groutWidth")) s.groutWidth = j.at("groutWidth").get<int>();
    if (j.contains("groutColor")) s.groutColor = color_from_json(j.at("groutColor"));
    if (j.contains("noiseAmplitude")) s.noiseAmplitude = j.at("noiseAmplitude").get<int>();
    if (j.contains("object")) s.object = object_from_name(j.at("object").get<std::string>());
    if (j.contains("objectColor")) s.objectColor = color_from_json(j.at("objectColor"));
    if (j.contains("cx")) s.cx = j.at("cx").get<double>();
    if (j.contains("cy")) s.cy = j.at("cy").get<double>();
    if (j.contains("size")) s.size = j.at("size").get<double>();
    if (j.contains("sizeB")) s.sizeB = j.at("sizeB").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

}  // namespace

std::pair<ImageRGB, BinaryMask> generate(const SynthSpec& spec) {
    validate(spec);
    ImageRGB img(spec.width, spec.height);
    BinaryMask mask(spec.width, spec.height);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const bool obj = inside_object(spec, x, y);
            const std::array<std::uint8_t, 3> color =
                obj ? spec.objectColor : background_at(spec, x, y);
            std::uint8_t* px = img.px(x, y);
            px[0] = color[0];
            px[1] = color[1];
            px[2] = color[2];
            mask.values[static_cast<std::size_t>(y) * spec.width + x] = obj ? 1 : 0;
        }
    }
    return {std::move(img), std::move(mask)};
}

std::string spec_to_json(const SynthSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["background"] = background_name(spec.background);
    j["bgColor"] = color_json(spec.bgColor);
    j["bgColorB"] = color_json(spec.bgColorB);
    j["tile"] = spec.tile;
    j["groutWidth"] = spec.groutWidth;
    j["groutColor"] = color_json(spec.groutColor);
    j["noiseAmplitude"] = spec.noiseAmplitude;
    j["object"] = object_name(spec.object);
    j["objectColor"] = color_json(spec.objectColor);
    j["cx"] = spec.cx;
    j["cy"] = spec.cy;
    j["size"] = spec.size;
    j["sizeB"] = spec.sizeB;
    j["seed"] = spec.seed;
    return j.dump(2);
}

SynthSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("synth: bad JSON: ") + e.what());
    }
    return spec_from_json_obj(j);
}

std::vector<SynthSpec> load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("synth: bad JSON: ") + e.what());
    }
    std::vector<SynthSpec> specs;
    if (j.is_object() && j.contains("suite")) j = j.at("suite");
    if (j.is_array()) {
        for (const auto& item : j) specs.push_back(spec_from_json_obj(item));
    } else {
        specs.push_back(spec_from_json_obj(j));
    }
    if (specs.empty()) throw std::invalid_argument("synth: spec file holds no specs");
    return specs;
}

std::vector<SynthSpec> benchmark_suite() {
    std::vector<SynthSpec> suite;
    const std::array<std::uint8_t, 3> orange{230, 90, 40};
    const std::array<std::uint8_t, 3> yellow{215, 205, 60};
    const std::array<std::uint8_t, 3> cyan{60, 180, 220};

    auto base = [&](const char* name, BackgroundKind bg, ObjectKind obj,
                    std::array<std::uint8_t, 3> color) {
        SynthSpec s;
        s.name = name;
        s.background = bg;
        s.object = obj;
        s.objectColor = color;
        if (bg == BackgroundKind::kCheckerboard) {
            s.bgColor = {60, 60, 60};
            s.bgColorB = {90, 90, 90};
            s.groutWidth = 1;
            s.groutColor = {230, 230, 230};
        } else if (bg == BackgroundKind::kNoise) {
            s.bgColor = {70, 70, 80};
            s.noiseAmplitude = 25;
        }
        switch (obj) {
            case ObjectKind::kDisk:
                s.size = 60;
                break;
            case ObjectKind::kRectangle:
                s.size = 140;
                s.sizeB = 90;
                break;
            case ObjectKind::kRing:
                s.size = 70;
                s.sizeB = 25;
                break;
        }
        return s;
    };

    suite.push_back(base("flat_disk", BackgroundKind::kFlat, ObjectKind::kDisk, orange));
    suite.push_back(base("flat_rect", BackgroundKind::kFlat, ObjectKind::kRectangle, yellow));
    suite.push_back(base("flat_ring", BackgroundKind::kFlat, ObjectKind::kRing, cyan));
    {
        SynthSpec s = base("flat_disk_off", BackgroundKind::kFlat, ObjectKind::kDisk, orange);
        s.size = 45;
        s.cx = 150;
        s.cy = 120;
        suite.push_back(s);
    }
    {
        SynthSpec s = base("flat_disk_big", BackgroundKind::kFlat, ObjectKind::kDisk,
                           {200, 60, 160});
        s.size = 80;
        s.bgColor = {50, 55, 50};
        suite.push_back(s);
    }

    auto checker = [&](int tile, const char* name, ObjectKind obj,
                       std::array<std::uint8_t, 3> color) {
        SynthSpec s = base(name, BackgroundKind::kCheckerboard, obj, color);
        s.tile = tile;
        return s;
    };
    suite.push_back(checker(4, "checker4_disk", ObjectKind::kDisk, orange));
    suite.push_back(checker(4, "checker4_rect", ObjectKind::kRectangle, yellow));
    suite.push_back(checker(4, "checker4_ring", ObjectKind::kRing, cyan));
    {
        SynthSpec s = checker(4, "checker4_disk_off", ObjectKind::kDisk, orange);
        s.size = 45;
        s.cx = 250;
        s.cy = 180;
        suite.push_back(s);
    }
    {
        SynthSpec s = checker(4, "checker4_rect_big", ObjectKind::kRectangle, yellow);
        s.size = 170;
        s.sizeB = 110;
        s.bgColor = {70, 65, 60};
        s.bgColorB = {100, 95, 85};
        s.groutColor = {235, 235, 235};
        suite.push_back(s);
    }
    suite.push_back(checker(8, "checker8_disk", ObjectKind::kDisk, orange));
    suite.push_back(checker(8, "checker8_rect", ObjectKind::kRectangle, yellow));
    suite.push_back(checker(8, "checker8_ring", ObjectKind::kRing, cyan));
    {
        SynthSpec s = checker(8, "checker8_rect_off", ObjectKind::kRectangle, yellow);
        s.size = 110;
        s.sizeB = 70;
        s.cx = 160;
        s.cy = 130;
        suite.push_back(s);
    }
    {
        SynthSpec s = checker(8, "checker8_disk_big", ObjectKind::kDisk, orange);
        s.size = 75;
        s.bgColor = {55, 60, 70};
        s.bgColorB = {85, 90, 100};
        s.groutColor = {225, 230, 235};
        suite.push_back(s);
    }

    auto noise = [&](const char* name, ObjectKind obj, std::array<std::uint8_t, 3> color,
                     std::uint64_t seed) {
        SynthSpec s = base(name, BackgroundKind::kNoise, obj, color);
        s.seed = seed;
        return s;
    };
    suite.push_back(noise("noise_disk", ObjectKind::kDisk, orange, 11));
    suite.push_back(noise("noise_rect", ObjectKind::kRectangle, yellow, 12));
    suite.push_back(noise("noise_ring", ObjectKind::kRing, cyan, 13));
    {
        SynthSpec s = noise("noise_disk_off", ObjectKind::kDisk, orange, 14);
        s.size = 45;
        s.cx = 240;
        s.cy = 120;
        suite.push_back(s);
    }
    {
        SynthSpec s = noise("noise_rect_big", ObjectKind::kRectangle, {90, 200, 90}, 15);
        s.size = 160;
        s.sizeB = 100;
        s.bgColor = {65, 60, 70};
        s.noiseAmplitude = 20;
        suite.push_back(s);
    }
    return suite;
}

}  // namespace hisal
