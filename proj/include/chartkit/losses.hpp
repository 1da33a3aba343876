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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chartkit/channel.hpp"
#include "chartkit/geometry.hpp"
#include "chartkit/linalg.hpp"
#include "chartkit/rng.hpp"

namespace chartkit {

struct Triplet {
    std::size_t anchor;
    std::size_t close;
    std::size_t far;
};

// Index triples (n, c, f) with 0 < |t(n)-t(c)| <= T_c <= T_f < |t(n)-t(f)|.
struct TripletSet {
    std::vector<Triplet> triples;
    double t_close = 2.0;
    double t_far = 2.0;
};

struct LossWeights {
    double cc = 1.0;
    double dt = 1.0;
    double bi = 1.0;
    double box = 1.0;
};

struct BoundingBox {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

namespace detail {

// Per-anchor coherence windows on a sorted timestamp vector. `close` is the
// index range within T_c (minus the anchor itself), `far_left`/`far_right`
// bound the indices strictly beyond T_f.
struct AnchorWindows {
    std::size_t close_lo, close_hi; // [lo, hi) contains the anchor
    std::size_t far_left;           // [0, far_left)
    std::size_t far_right;          // [far_right, N)
    std::uint64_t close_count, far_count;
};

inline AnchorWindows anchor_windows(const std::vector<double>& ts, std::size_t n, double t_close,
                                    double t_far) {
    AnchorWindows w;
    const double t = ts[n];
    w.close_lo = std::size_t(std::lower_bound(ts.begin(), ts.end(), t - t_close) - ts.begin());
    w.close_hi = std::size_t(std::upper_bound(ts.begin(), ts.end(), t + t_close) - ts.begin());
    w.far_left = std::size_t(std::lower_bound(ts.begin(), ts.end(), t - t_far) - ts.begin());
    w.far_right = std::size_t(std::upper_bound(ts.begin(), ts.end(), t + t_far) - ts.begin());
    w.close_count = w.close_hi - w.close_lo - 1; // anchor excluded
    w.far_count = w.far_left + (ts.size() - w.far_right);
    return w;
}

} // namespace detail

// Uniformly samples `budget` valid triples (with replacement) from the full
// valid set. Anchors are drawn proportionally to their number of valid
// (close, far) combinations, which makes each valid triple equally likely.
// Timestamps must be sorted ascending.
inline TripletSet build_triplets(const std::vector<double>& timestamps, double t_close,
                                 double t_far, std::size_t budget, Rng& rng) {
    if (t_close > t_far)
        throw std::invalid_argument("build_triplets: requires T_c <= T_f");
    if (budget == 0)
        throw std::invalid_argument("build_triplets: budget must be >= 1");
    if (!std::is_sorted(timestamps.begin(), timestamps.end()))
        throw std::invalid_argument("build_triplets: timestamps must be sorted ascending");

    const std::size_t n_samples = timestamps.size();
    std::vector<detail::AnchorWindows> windows(n_samples);
    std::vector<std::uint64_t> cumulative(n_samples + 1, 0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        windows[i] = detail::anchor_windows(timestamps, i, t_close, t_far);
        cumulative[i + 1] = cumulative[i] + windows[i].close_count * windows[i].far_count;
    }
    const std::uint64_t total = cumulative.back();
    if (total == 0)
        throw std::invalid_argument("build_triplets: no valid triple for the given T_c/T_f");

    TripletSet set;
    set.t_close = t_close;
    set.t_far = t_far;
    set.triples.reserve(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        const std::uint64_t r = rng.uniform_index(total);
        const std::size_t n =
            std::size_t(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                        cumulative.begin()) -
            1;
        const auto& w = windows[n];
        const std::uint64_t rem = r - cumulative[n];
        std::uint64_t ci = rem / w.far_count;
        const std::uint64_t fi = rem % w.far_count;
        // Skip the anchor inside the close window.
        std::size_t c = w.close_lo + std::size_t(ci);
        if (c >= n)
            ++c;
        const std::size_t f =
            fi < w.far_left ? std::size_t(fi) : w.far_right + std::size_t(fi - w.far_left);
        set.triples.push_back(Triplet{n, c, f});
    }
    return set;
}

// Exhaustive count of valid triples (testing/reporting aid).
inline std::uint64_t count_valid_triplets(const std::vector<double>& timestamps, double t_close,
                                          double t_far) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        const auto w = detail::anchor_windows(timestamps, i, t_close, t_far);
        total += w.close_count * w.far_count;
    }
    return total;
}

struct TripletLossResult {
    double value = 0.0;
    std::vector<Vec2> grad; // w.r.t. the estimated positions
};

// Timestamp triplet loss: mean over triples of
// (||x_n - x_c|| - ||x_n - x_f|| + M_t)^+. The subgradient is 0 at the hinge
// kink and for coincident point pairs.
inline TripletLossResult triplet_loss(const std::vector<Vec2>& positions, const TripletSet& set,
                                      double margin) {
    if (set.triples.empty())
        throw std::invalid_argument("triplet_loss: empty triplet set");
    TripletLossResult res;
    res.grad.assign(positions.size(), Vec2{0.0, 0.0});
    const double inv = 1.0 / double(set.triples.size());
    for (const Triplet& t : set.triples) {
        const Vec2 xn = positions.at(t.anchor);
        const Vec2 xc = positions.at(t.close);
        const Vec2 xf = positions.at(t.far);
        const double dc = norm(xn - xc);
        const double df = norm(xn - xf);
        const double v = dc - df + margin;
        if (v <= 0.0)
            continue;
        res.value += v * inv;
        if (dc > 0.0) {
            const Vec2 g = (inv / dc) * (xn - xc);
            res.grad[t.anchor] = res.grad[t.anchor] + g;
            res.grad[t.close] = res.grad[t.close] - g;
        }
        if (df > 0.0) {
            const Vec2 g = (inv / df) * (xn - xf);
            res.grad[t.anchor] = res.grad[t.anchor] - g;
            res.grad[t.far] = res.grad[t.far] + g;
        }
    }
    return res;
}

// Per-sample digital-twin loss term exp(-|<v, v~>|^2 / (||v||^2 ||v~||^2))
// and its gradient with respect to v~. Large-scale features are nonnegative
// reals, so the Hermitian inner product reduces to the real dot product.
inline double dt_loss_sample(const std::vector<double>& v, const std::vector<double>& v_tilde,
                             std::vector<double>* grad_v_tilde) {
    const double vv = norm_sq(v);
    const double tt = norm_sq(v_tilde);
    if (vv <= 0.0)
        throw std::invalid_argument("dt_loss: zero measured feature vector");
    if (tt <= 0.0)
        throw std::invalid_argument("dt_loss: zero expected feature vector");
    const double s = dot(v, v_tilde);
    const double q = s * s / (vv * tt);
    const double value = std::exp(-q);
    if (grad_v_tilde != nullptr) {
        grad_v_tilde->assign(v.size(), 0.0);
        const double c = -value * 2.0 * s / (vv * tt);
        for (std::size_t i = 0; i < v.size(); ++i)
            (*grad_v_tilde)[i] = c * (v[i] - (s / tt) * v_tilde[i]);
    }
    return value;
}

struct DtLossResult {
    double value = 0.0;
    std::vector<std::vector<double>> grad; // w.r.t. each expected feature vector
};

// Mean of the per-sample DT terms.
inline DtLossResult dt_loss(const std::vector<std::vector<double>>& v,
                            const std::vector<std::vector<double>>& v_tilde) {
    if (v.size() != v_tilde.size() || v.empty())
        throw std::invalid_argument("dt_loss: mismatched or empty sample lists");
    DtLossResult res;
    res.grad.resize(v.size());
    const double inv = 1.0 / double(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
        double sample;
        try {
            sample = dt_loss_sample(v[n], v_tilde[n], &res.grad[n]);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(std::string(e.what()) + " (sample " + std::to_string(n) +
                                        ")");
        }
        res.value += sample * inv;
        for (double& g : res.grad[n])
            g *= inv;
    }
    return res;
}

// Combined objective of the proposed method.
inline double combined_loss(const LossWeights& w, double cc_term, double dt_term) {
    if (w.cc < 0.0 || w.dt < 0.0)
        throw std::invalid_argument("combined_loss: weights must be nonnegative");
    return w.cc * cc_term + w.dt * dt_term;
}

// AP received power in dB; exactly-zero blocks map to -infinity so they can
// never clear the LoS threshold.
inline double ap_power_db(const CMatrix& block) {
    const double e = block.frob_sq();
    if (e <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(std::sqrt(e));
}

// Percentile (0..100) of the finite per-AP powers across a dataset.
inline double power_threshold_percentile(const std::vector<CsiTensor>& data, double percentile) {
    std::vector<double> powers;
    for (const CsiTensor& t : data)
        for (const CMatrix& block : t.per_ap) {
            const double p = ap_power_db(block);
            if (std::isfinite(p))
                powers.push_back(p);
        }
    if (powers.empty())
        throw std::invalid_argument("power_threshold_percentile: no finite AP power");
    std::sort(powers.begin(), powers.end());
    const double idx = std::clamp(percentile, 0.0, 100.0) / 100.0 * double(powers.size() - 1);
    return powers[std::size_t(std::llround(idx))];
}

// Estimated-LoS AP sets and the power-ordered AP pairs per sample.
struct BbbSets {
    std::vector<std::vector<int>> los;
    std::vector<std::vector<std::pair<int, int>>> pairs; // (closer, farther)
};

inline BbbSets compute_bbb_sets(const std::vector<CsiTensor>& data, double power_threshold_db,
                                double pair_margin_db) {
    BbbSets sets;
    sets.los.resize(data.size());
    sets.pairs.resize(data.size());
    for (std::size_t n = 0; n < data.size(); ++n) {
        std::vector<double> power(data[n].per_ap.size());
        for (std::size_t a = 0; a < data[n].per_ap.size(); ++a) {
            power[a] = ap_power_db(data[n].per_ap[a]);
            if (power[a] > power_threshold_db)
                sets.los[n].push_back(int(a));
        }
        for (int ac : sets.los[n])
            for (int af : sets.los[n])
                if (power[std::size_t(ac)] > power[std::size_t(af)] + pair_margin_db)
                    sets.pairs[n].emplace_back(ac, af);
    }
    return sets;
}

struct BbbLossResult {
    double bilateration = 0.0;
    double box = 0.0;
    std::vector<Vec2> grad_bilateration;
    std::vector<Vec2> grad_box;
    bool empty_pairs = false;
    bool empty_los = false;
};

// Bilateration and bounding-box losses over precomputed LoS sets. When no
// AP pair (or no estimated-LoS AP) exists anywhere, the respective loss is 0
// and a flag is raised so callers can warn.
inline BbbLossResult bbb_losses(const BbbSets& sets, const std::vector<Vec2>& ap_positions,
                                const std::vector<BoundingBox>& boxes, double pair_margin_m,
                                const std::vector<Vec2>& positions) {
    for (const BoundingBox& b : boxes)
        if (b.x_min > b.x_max || b.y_min > b.y_max)
            throw std::invalid_argument("bbb_losses: invalid bounding box");
    if (sets.los.size() != positions.size())
        throw std::invalid_argument("bbb_losses: set/position count mismatch");

    BbbLossResult res;
    res.grad_bilateration.assign(positions.size(), Vec2{0.0, 0.0});
    res.grad_box.assign(positions.size(), Vec2{0.0, 0.0});

    std::size_t total_pairs = 0, total_los = 0;
    for (std::size_t n = 0; n < positions.size(); ++n) {
        total_pairs += sets.pairs[n].size();
        total_los += sets.los[n].size();
    }
    res.empty_pairs = total_pairs == 0;
    res.empty_los = total_los == 0;

    if (!res.empty_pairs) {
        const double inv = 1.0 / double(total_pairs);
        for (std::size_t n = 0; n < positions.size(); ++n) {
            const Vec2 x = positions[n];
            for (const auto& [ac, af] : sets.pairs[n]) {
                const Vec2 pc = ap_positions.at(std::size_t(ac));
                const Vec2 pf = ap_positions.at(std::size_t(af));
                const double dc = norm(x - pc);
                const double df = norm(x - pf);
                const double v = dc - df + pair_margin_m;
                if (v <= 0.0)
                    continue;
                res.bilateration += v * inv;
                if (dc > 0.0)
                    res.grad_bilateration[n] = res.grad_bilateration[n] + (inv / dc) * (x - pc);
                if (df > 0.0)
                    res.grad_bilateration[n] = res.grad_bilateration[n] - (inv / df) * (x - pf);
            }
        }
    }
    if (!res.empty_los) {
        const double inv = 1.0 / double(total_los);
        for (std::size_t n = 0; n < positions.size(); ++n) {
            const Vec2 x = positions[n];
            for (const int a : sets.los[n]) {
                const BoundingBox& b = boxes.at(std::size_t(a));
                if (b.contains(x))
                    continue;
                const Vec2 closest{std::clamp(x.x, b.x_min, b.x_max),
                                   std::clamp(x.y, b.y_min, b.y_max)};
                const Vec2 d = x - closest;
                res.box += dot(d, d) * inv;
                res.grad_box[n] = res.grad_box[n] + (2.0 * inv) * d;
            }
        }
    }
    return res;
}

struct SupervisedLossResult {
    double value = 0.0;
    std::vector<Vec2> grad;
};

// Mean squared Euclidean error against ground-truth positions.
inline SupervisedLossResult supervised_loss(const std::vector<Vec2>& estimated,
                                            const std::vector<Vec2>& truth) {
    if (estimated.size() != truth.size() || estimated.empty())
        throw std::invalid_argument("supervised_loss: length mismatch");
    SupervisedLossResult res;
    res.grad.assign(estimated.size(), Vec2{0.0, 0.0});
    const double inv = 1.0 / double(estimated.size());
    for (std::size_t n = 0; n < estimated.size(); ++n) {
        const Vec2 d = estimated[n] - truth[n];
        res.value += dot(d, d) * inv;
        res.grad[n] = (2.0 * inv) * d;
    }
    return res;
}

struct AffineTransform {
    std::array<std::array<double, 2>, 2> a{{{1.0, 0.0}, {0.0, 1.0}}};
    Vec2 b{0.0, 0.0};

    Vec2 apply(Vec2 x) const {
        return {a[0][0] * x.x + a[0][1] * x.y + b.x, a[1][0] * x.x + a[1][1] * x.y + b.y};
    }
};

// Least-squares affine alignment min sum ||A x_chart + b - x_true||^2 via
// the 3x3 normal equations on homogeneous coordinates.
inline AffineTransform affine_fit(const std::vector<Vec2>& chart, const std::vector<Vec2>& truth) {
    if (chart.size() != truth.size())
        throw std::invalid_argument("affine_fit: length mismatch");
    if (chart.size() < 3)
        throw std::invalid_argument("affine_fit: needs at least 3 samples");

    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double rhs[3][2] = {{0, 0}, {0, 0}, {0, 0}};
    for (std::size_t n = 0; n < chart.size(); ++n) {
        const double phi[3] = {chart[n].x, chart[n].y, 1.0};
        const double y[2] = {truth[n].x, truth[n].y};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                m[i][j] += phi[i] * phi[j];
            rhs[i][0] += phi[i] * y[0];
            rhs[i][1] += phi[i] * y[1];
        }
    }

    // Gaussian elimination with partial pivoting on the 3x3 system.
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            scale = std::max(scale, std::abs(m[i][j]));
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        if (std::abs(m[piv][col]) <= 1e-12 * scale)
            throw std::invalid_argument("affine_fit: rank-deficient design (collinear chart)");
        if (piv != col) {
            for (int j = 0; j < 3; ++j)
                std::swap(m[col][j], m[piv][j]);
            std::swap(rhs[col][0], rhs[piv][0]);
            std::swap(rhs[col][1], rhs[piv][1]);
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col)
                continue;
            const double f = m[r][col] / m[col][col];
            for (int j = 0; j < 3; ++j)
                m[r][j] -= f * m[col][j];
            rhs[r][0] -= f * rhs[col][0];
            rhs[r][1] -= f * rhs[col][1];
        }
    }

    AffineTransform t;
    for (int d = 0; d < 2; ++d) {
        const double sol[3] = {rhs[0][d] / m[0][0], rhs[1][d] / m[1][1], rhs[2][d] / m[2][2]};
        t.a[d][0] = sol[0];
        t.a[d][1] = sol[1];
        (d == 0 ? t.b.x : t.b.y) = sol[2];
    }
    return t;
}

} // namespace chartkit
