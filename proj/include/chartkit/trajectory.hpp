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
#include <stdexcept>
#include <vector>

#include "chartkit/geometry.hpp"
#include "chartkit/scenario.hpp"

namespace chartkit {

struct Trajectory {
    std::vector<Vec3> positions;
    std::vector<double> timestamps;

    std::size_t size() const { return positions.size(); }

    void validate() const {
        if (positions.size() != timestamps.size())
            throw std::invalid_argument("Trajectory: positions/timestamps length mismatch");
        for (std::size_t i = 1; i < timestamps.size(); ++i)
            if (timestamps[i] <= timestamps[i - 1])
                throw std::invalid_argument("Trajectory: timestamps must be strictly increasing");
    }
};

// Piecewise-linear walk along the waypoints at constant spatial step and
// constant time step, at fixed height. Samples land at arc lengths
// 0, step, 2*step, ... up to the total path length.
inline Trajectory generate_trajectory(const Scenario& sc, const std::vector<Vec2>& waypoints,
                                      double step_m, double height_m, double dt_s) {
    if (step_m <= 0.0)
        throw std::invalid_argument("generate_trajectory: step must be positive");
    if (dt_s <= 0.0)
        throw std::invalid_argument("generate_trajectory: time step must be positive");
    if (waypoints.empty())
        throw std::invalid_argument("generate_trajectory: no waypoints");
    for (const Vec2& w : waypoints)
        if (!inside_floor_plan(sc, w))
            throw std::invalid_argument("generate_trajectory: waypoint outside the floor plan");

    Trajectory traj;
    if (waypoints.size() == 1) {
        traj.positions.push_back({waypoints[0].x, waypoints[0].y, height_m});
        traj.timestamps.push_back(0.0);
        return traj;
    }

    // Cumulative arc length per waypoint.
    std::vector<double> arc(waypoints.size(), 0.0);
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        arc[i] = arc[i - 1] + norm(waypoints[i] - waypoints[i - 1]);
    const double total = arc.back();

    std::size_t seg = 0;
    const double eps = 1e-9 * std::max(1.0, total);
    for (std::size_t i = 0;; ++i) {
        const double s = double(i) * step_m;
        if (s > total + eps)
            break;
        const double s_clamped = std::min(s, total);
        while (seg + 2 < waypoints.size() && arc[seg + 1] < s_clamped)
            ++seg;
        const double seg_len = arc[seg + 1] - arc[seg];
        const double t = seg_len > 0.0 ? (s_clamped - arc[seg]) / seg_len : 0.0;
        const Vec2 p = waypoints[seg] + t * (waypoints[seg + 1] - waypoints[seg]);
        traj.positions.push_back({p.x, p.y, height_m});
        traj.timestamps.push_back(double(i) * dt_s);
    }
    traj.validate();
    return traj;
}

} // namespace chartkit
