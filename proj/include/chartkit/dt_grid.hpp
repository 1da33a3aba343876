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

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "chartkit/geometry.hpp"
#include "chartkit/scenario.hpp"

namespace chartkit {

// Predefined UE positions in the digital twin.
struct DtGrid {
    double spacing = 0.5;
    double height = 1.5;
    std::vector<Vec2> points;

    std::size_t size() const { return points.size(); }

    Vec3 point3(std::size_t i) const { return {points[i].x, points[i].y, height}; }
};

// Axis-aligned lattice at the given spacing, clipped to the strict interior
// of the floor plan. The lattice is anchored one spacing in from the lower
// left corner of the boundary's bounding box.
inline DtGrid generate_dt_grid(const Scenario& sc, double spacing, double height) {
    if (spacing <= 0.0)
        throw std::invalid_argument("generate_dt_grid: spacing must be positive");
    const auto poly = boundary_polygon(sc.walls);
    if (!poly)
        throw std::invalid_argument("generate_dt_grid: scenario has no closed floor plan");

    double x_min = poly->front().x, x_max = x_min;
    double y_min = poly->front().y, y_max = y_min;
    for (const Vec2& v : *poly) {
        x_min = std::min(x_min, v.x);
        x_max = std::max(x_max, v.x);
        y_min = std::min(y_min, v.y);
        y_max = std::max(y_max, v.y);
    }

    DtGrid grid;
    grid.spacing = spacing;
    grid.height = height;
    for (int i = 1; x_min + double(i) * spacing < x_max; ++i) {
        for (int j = 1; y_min + double(j) * spacing < y_max; ++j) {
            const Vec2 p{x_min + double(i) * spacing, y_min + double(j) * spacing};
            if (point_in_polygon_strict(*poly, p))
                grid.points.push_back(p);
        }
    }
    if (grid.points.empty())
        throw std::invalid_argument("generate_dt_grid: spacing leaves no interior grid point");
    return grid;
}

} // namespace chartkit
