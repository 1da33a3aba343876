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

namespace chartkit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec2 xy() const { return {x, y}; }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Wall footprint in the floor plan; walls are vertical planes through the
// segment, unbounded in z.
struct Segment2 {
    Vec2 a;
    Vec2 b;

    double length() const { return norm(b - a); }
};

// Mirror p across the infinite line through seg; z is preserved.
inline Vec3 mirror_across(const Segment2& seg, const Vec3& p) {
    const Vec2 d = seg.b - seg.a;
    const double len_sq = dot(d, d);
    if (len_sq == 0.0)
        throw std::invalid_argument("mirror_across: degenerate segment");
    const Vec2 r = p.xy() - seg.a;
    const double t = dot(r, d) / len_sq;
    const Vec2 foot = seg.a + t * d;
    const Vec2 m = 2.0 * foot - p.xy();
    return {m.x, m.y, p.z};
}

// Intersection of segments (p, p+r) and (q, q+s) in parametric form.
// Returns (t, u) with intersection = p + t*r = q + u*s, or nullopt for
// parallel segments (collinear overlap is treated as no crossing; the
// simulator never relies on grazing-parallel geometry).
inline std::optional<std::pair<double, double>> segment_intersection_params(Vec2 p, Vec2 r, Vec2 q,
                                                                            Vec2 s) {
    const double denom = cross(r, s);
    const double scale = norm(r) * norm(s);
    if (std::abs(denom) <= 1e-14 * (scale > 0.0 ? scale : 1.0))
        return std::nullopt;
    const Vec2 qp = q - p;
    const double t = cross(qp, s) / denom;
    const double u = cross(qp, r) / denom;
    return std::make_pair(t, u);
}

inline double point_segment_distance(Vec2 p, const Segment2& seg) {
    const Vec2 d = seg.b - seg.a;
    const double len_sq = dot(d, d);
    if (len_sq == 0.0)
        return norm(p - seg.a);
    double t = dot(p - seg.a, d) / len_sq;
    t = std::max(0.0, std::min(1.0, t));
    return norm(p - (seg.a + t * d));
}

inline double polygon_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        s += cross(a, b);
    }
    return 0.5 * s;
}

// Strict interior test by ray casting; boundary points count as outside.
inline bool point_in_polygon_strict(const std::vector<Vec2>& poly, Vec2 p) {
    const std::size_t n = poly.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Segment2 edge{poly[i], poly[(i + 1) % n]};
        if (point_segment_distance(p, edge) < 1e-12)
            return false;
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_cross)
                inside = !inside;
        }
    }
    return inside;
}

} // namespace chartkit
