// chartkit: digital-twin-aided channel charting toolkit
// Copyright (C) 2026 The chartkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "chartkit/geometry.hpp"
#include "chartkit/scenario.hpp"

namespace chartkit {

// Virtual transmitter obtained by mirroring the source across the listed
// wall sequence (in the order the physical path hits them). `coeff` is the
// product of the wall reflection coefficients along the sequence.
struct ImageSource {
    Vec3 point;
    double coeff = 1.0;
    std::vector<int> walls;
};

// Direct source plus all mirror images up to the given reflection order.
// Sequences never repeat a wall twice in a row (a double bounce off the same
// plane folds back onto the original point).
inline std::vector<ImageSource> build_image_sources(const Scenario& sc, const Vec3& source,
                                                    int order) {
    if (order > sc.max_reflection_order)
        throw std::invalid_argument("build_image_sources: order exceeds max_reflection_order");
    std::vector<ImageSource> out;
    out.push_back(ImageSource{source, 1.0, {}});
    std::size_t level_begin = 0;
    for (int k = 1; k <= order; ++k) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (int w = 0; w < int(sc.walls.size()); ++w) {
                if (!out[i].walls.empty() && out[i].walls.back() == w)
                    continue;
                ImageSource img;
                img.point = mirror_across(sc.walls[w].seg, out[i].point);
                img.coeff = out[i].coeff * sc.walls[w].reflectivity;
                img.walls = out[i].walls;
                img.walls.push_back(w);
                out.push_back(std::move(img));
            }
        }
        level_begin = level_end;
    }
    return out;
}

// True when an opaque wall crosses the open interior of the 2D leg (p, q).
// Endpoints are excluded with a small parametric margin so that legs that
// start or end on a wall (reflection points, conducted tests with sources on
// walls) are not blocked by that wall itself.
inline bool leg_blocked(const Scenario& sc, Vec2 p, Vec2 q) {
    const Vec2 r = q - p;
    for (const Wall& w : sc.walls) {
        if (!w.opaque())
            continue;
        const auto hit = segment_intersection_params(p, r, w.seg.a, w.seg.b - w.seg.a);
        if (!hit)
            continue;
        const double t = hit->first;
        const double u = hit->second;
        if (t > 1e-9 && t < 1.0 - 1e-9 && u >= -1e-12 && u <= 1.0 + 1e-12)
            return true;
    }
    return false;
}

inline bool los_clear(const Scenario& sc, Vec2 p, Vec2 q) { return !leg_blocked(sc, p, q); }

// A validated specular path.
struct PropPath {
    double length = 0.0;     // unfolded 3D length
    double coeff = 1.0;      // cumulative reflection coefficient
    Vec3 arrival_dir;        // unit vector from the receiver toward the image
};

// Validity test for one image: unfolds the reflection sequence from the
// receiver side, requiring every reflection point to land on its wall
// segment and every physical leg to be free of opaque walls.
inline std::optional<PropPath> trace_path(const Scenario& sc, const ImageSource& img,
                                          const Vec3& source, const Vec3& receiver) {
    const std::size_t k = img.walls.size();

    // Forward image chain I[0] = source, I[j] = mirror(I[j-1], wall_j).
    std::vector<Vec3> chain(k + 1);
    chain[0] = source;
    for (std::size_t j = 0; j < k; ++j)
        chain[j + 1] = mirror_across(sc.walls[img.walls[j]].seg, chain[j]);

    const double d = norm(img.point - receiver);
    if (d <= 1e-12)
        return std::nullopt;

    Vec2 cur = receiver.xy();
    for (std::size_t j = k; j-- > 0;) {
        const Segment2& wall = sc.walls[img.walls[j]].seg;
        const Vec2 target = chain[j + 1].xy();
        const auto hit = segment_intersection_params(cur, target - cur, wall.a, wall.b - wall.a);
        if (!hit)
            return std::nullopt;
        const double t = hit->first;
        const double u = hit->second;
        if (t <= 1e-9 || t >= 1.0 - 1e-9 || u < -1e-12 || u > 1.0 + 1e-12)
            return std::nullopt;
        const Vec2 point = cur + t * (target - cur);
        if (leg_blocked(sc, cur, point))
            return std::nullopt;
        cur = point;
    }
    if (leg_blocked(sc, cur, source.xy()))
        return std::nullopt;

    PropPath path;
    path.length = d;
    path.coeff = img.coeff;
    path.arrival_dir = (1.0 / d) * (img.point - receiver);
    return path;
}

// All valid paths between source and receiver up to the reflection order.
inline std::vector<PropPath> trace_all_paths(const Scenario& sc, const Vec3& source,
                                             const Vec3& receiver, int order) {
    std::vector<PropPath> paths;
    for (const ImageSource& img : build_image_sources(sc, source, order)) {
        if (const auto p = trace_path(sc, img, source, receiver))
            paths.push_back(*p);
    }
    return paths;
}

} // namespace chartkit
