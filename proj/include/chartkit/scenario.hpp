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

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "chartkit/geometry.hpp"

namespace chartkit {

constexpr double kSpeedOfLight = 299792458.0;

// A reflection coefficient of exactly 0 tags the wall as opaque: it blocks
// transmission through it and contributes nothing as a reflector. Walls with
// a positive coefficient reflect with that amplitude and are transparent to
// paths crossing them.
struct Wall {
    Segment2 seg;
    double reflectivity = 0.7;

    bool opaque() const { return reflectivity == 0.0; }
};

// Uniform linear array, half-wavelength spacing, centered on `position`.
struct ApConfig {
    Vec3 position;
    int num_elements = 1;
    Vec3 orientation{1.0, 0.0, 0.0};
};

struct Scenario {
    std::vector<Wall> walls;
    std::vector<ApConfig> aps;
    double carrier_freq_hz = 2.4e9;
    double bandwidth_hz = 20e6;
    int num_subcarriers = 52;
    int max_reflection_order = 2;
    double noise_floor = 0.0; // linear power below which a block counts as zero

    double wavelength() const { return kSpeedOfLight / carrier_freq_hz; }

    // Centered OFDM grid: f_s = f_c + (s - S/2) * (B/S), s = 0..S-1.
    double subcarrier_freq(int s) const {
        return carrier_freq_hz +
               (double(s) - 0.5 * double(num_subcarriers)) * bandwidth_hz / double(num_subcarriers);
    }

    void validate() const {
        if (num_subcarriers < 1)
            throw std::invalid_argument("Scenario: num_subcarriers must be >= 1");
        if (max_reflection_order < 0)
            throw std::invalid_argument("Scenario: max_reflection_order must be >= 0");
        if (carrier_freq_hz <= 0.0 || bandwidth_hz <= 0.0)
            throw std::invalid_argument("Scenario: carrier frequency and bandwidth must be positive");
        for (const Wall& w : walls) {
            if (w.seg.length() <= 0.0)
                throw std::invalid_argument("Scenario: degenerate wall segment");
            if (w.reflectivity < 0.0 || w.reflectivity > 1.0)
                throw std::invalid_argument("Scenario: wall reflectivity outside [0,1]");
        }
        for (const ApConfig& ap : aps) {
            if (ap.num_elements < 1)
                throw std::invalid_argument("Scenario: AP needs at least one antenna element");
            if (std::abs(norm(ap.orientation) - 1.0) > 1e-6)
                throw std::invalid_argument("Scenario: AP orientation must be a unit vector");
        }
    }

    // Element k of AP a, offsets centered on the AP position.
    Vec3 ap_element_position(std::size_t a, int k) const {
        const ApConfig& ap = aps.at(a);
        const double spacing = 0.5 * wavelength();
        const double off = (double(k) - 0.5 * double(ap.num_elements - 1)) * spacing;
        return ap.position + off * ap.orientation;
    }
};

// The floor plan boundary is the closed loop of walls with the largest
// enclosed area; walls whose endpoints do not chain into a loop (interior
// partitions, T-junctions) do not bound the interior. Open scenes (no loop)
// have no boundary and every point counts as inside.
inline std::optional<std::vector<Vec2>> boundary_polygon(const std::vector<Wall>& walls) {
    const double tol = 1e-9;
    const std::size_t n = walls.size();
    auto same = [tol](Vec2 a, Vec2 b) { return norm(a - b) < tol; };

    std::vector<bool> used(n, false);
    std::optional<std::vector<Vec2>> best;
    double best_area = 0.0;

    for (std::size_t start = 0; start < n; ++start) {
        if (used[start])
            continue;
        std::vector<Vec2> poly{walls[start].seg.a, walls[start].seg.b};
        std::vector<std::size_t> chain{start};
        bool closed = false;
        while (!closed) {
            const Vec2 tail = poly.back();
            bool extended = false;
            for (std::size_t j = 0; j < n && !extended; ++j) {
                if (used[j] || j == start)
                    continue;
                bool in_chain = false;
                for (std::size_t c : chain)
                    in_chain = in_chain || c == j;
                if (in_chain)
                    continue;
                if (same(walls[j].seg.a, tail)) {
                    poly.push_back(walls[j].seg.b);
                    chain.push_back(j);
                    extended = true;
                } else if (same(walls[j].seg.b, tail)) {
                    poly.push_back(walls[j].seg.a);
                    chain.push_back(j);
                    extended = true;
                }
            }
            if (same(poly.back(), poly.front()) && poly.size() > 3) {
                closed = true;
                poly.pop_back();
            } else if (!extended) {
                break;
            }
        }
        if (closed) {
            for (std::size_t c : chain)
                used[c] = true;
            const double area = std::abs(polygon_area(poly));
            if (area > best_area) {
                best_area = area;
                best = poly;
            }
        }
    }
    return best;
}

inline bool inside_floor_plan(const Scenario& sc, Vec2 p) {
    const auto poly = boundary_polygon(sc.walls);
    if (!poly)
        return true;
    return point_in_polygon_strict(*poly, p);
}

} // namespace chartkit
