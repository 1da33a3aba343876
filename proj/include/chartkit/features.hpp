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
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "chartkit/channel.hpp"
#include "chartkit/dft.hpp"
#include "chartkit/dt_grid.hpp"
#include "chartkit/linalg.hpp"
#include "chartkit/parallel.hpp"
#include "chartkit/scenario.hpp"

namespace chartkit {

enum class FeatureKind { Power, App, Dpp, Cov, Tdp };

inline const char* feature_name(FeatureKind k) {
    switch (k) {
    case FeatureKind::Power: return "power";
    case FeatureKind::App: return "app";
    case FeatureKind::Dpp: return "dpp";
    case FeatureKind::Cov: return "cov";
    case FeatureKind::Tdp: return "tdp";
    }
    return "?";
}

inline FeatureKind feature_from_name(const std::string& s) {
    if (s == "power") return FeatureKind::Power;
    if (s == "app") return FeatureKind::App;
    if (s == "dpp") return FeatureKind::Dpp;
    if (s == "cov") return FeatureKind::Cov;
    if (s == "tdp") return FeatureKind::Tdp;
    throw std::invalid_argument("unknown feature kind: " + s);
}

// Per-AP feature dimension D.
inline std::size_t feature_dim(FeatureKind k, std::size_t antennas, std::size_t subcarriers,
                               std::size_t taps) {
    switch (k) {
    case FeatureKind::Power: return 1;
    case FeatureKind::App: return antennas;
    case FeatureKind::Dpp: return subcarriers;
    case FeatureKind::Cov: return antennas * antennas;
    case FeatureKind::Tdp: return antennas * taps;
    }
    return 0;
}

namespace detail {
// Column-major vectorization of the first `taps` delay-domain columns.
inline std::vector<std::complex<double>> truncated_tap_vec(const CMatrix& h, int taps) {
    if (taps < 1 || std::size_t(taps) > h.cols)
        throw std::invalid_argument("truncated taps outside [1, S]");
    const CMatrix y = idft_cols(h);
    std::vector<std::complex<double>> v;
    v.reserve(std::size_t(taps) * h.rows);
    for (std::size_t c = 0; c < std::size_t(taps); ++c)
        for (std::size_t m = 0; m < h.rows; ++m)
            v.push_back(y(m, c));
    return v;
}
} // namespace detail

// NN input feature (normalized magnitude of the truncated delay-domain CSI),
// computed on the M x S matrix stacked across APs.
inline std::vector<double> csi_input_feature(const CsiTensor& csi, int taps) {
    if (csi.per_ap.empty())
        throw std::invalid_argument("csi_input_feature: no AP blocks");
    const std::size_t k = csi.per_ap.front().rows;
    const std::size_t s = csi.per_ap.front().cols;
    CMatrix stacked(csi.per_ap.size() * k, s);
    for (std::size_t a = 0; a < csi.per_ap.size(); ++a) {
        const CMatrix& block = csi.per_ap[a];
        if (block.rows != k || block.cols != s)
            throw std::invalid_argument("csi_input_feature: inconsistent AP block shapes");
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < s; ++j)
                stacked(a * k + i, j) = block(i, j);
    }
    const auto h = detail::truncated_tap_vec(stacked, taps);
    double nrm = 0.0;
    for (const auto& z : h)
        nrm += std::norm(z);
    if (nrm <= 0.0)
        throw std::invalid_argument("csi_input_feature: all-zero CSI has no defined feature");
    nrm = std::sqrt(nrm);
    std::vector<double> f(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        f[i] = std::abs(h[i]) / nrm;
    return f;
}

// Power: energy of the first `taps` delay taps.
inline double feat_power(const CMatrix& h, int taps) { return truncated_tap_energy(h, taps); }

// Angle-power profile: row sums of |F_K H|^2.
inline std::vector<double> feat_app(const CMatrix& h) {
    const CMatrix hf = dft_rows(h);
    std::vector<double> v(h.rows, 0.0);
    for (std::size_t i = 0; i < hf.rows; ++i)
        for (std::size_t j = 0; j < hf.cols; ++j)
            v[i] += std::norm(hf(i, j));
    return v;
}

// Delay-power profile: column sums of |H F_S^H|^2, all S taps.
inline std::vector<double> feat_dpp(const CMatrix& h) {
    const CMatrix y = idft_cols(h);
    std::vector<double> v(h.cols, 0.0);
    for (std::size_t i = 0; i < y.rows; ++i)
        for (std::size_t j = 0; j < y.cols; ++j)
            v[j] += std::norm(y(i, j));
    return v;
}

// Covariance: |F_K H (F_K H)^H| vectorized column-major; diagonal equals APP.
inline std::vector<double> feat_cov(const CMatrix& h) {
    const CMatrix hf = dft_rows(h);
    const std::size_t k = h.rows;
    std::vector<double> v(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t s = 0; s < h.cols; ++s)
                acc += hf(i, s) * std::conj(hf(j, s));
            v[j * k + i] = std::abs(acc);
        }
    }
    return v;
}

// Truncated delay profile: per-AP application of the NN input feature.
inline std::vector<double> feat_tdp(const CMatrix& h, int taps) {
    const auto hv = detail::truncated_tap_vec(h, taps);
    double nrm = 0.0;
    for (const auto& z : hv)
        nrm += std::norm(z);
    if (nrm <= 0.0)
        throw std::invalid_argument("feat_tdp: all-zero CSI has no defined feature");
    nrm = std::sqrt(nrm);
    std::vector<double> v(hv.size());
    for (std::size_t i = 0; i < hv.size(); ++i)
        v[i] = std::abs(hv[i]) / nrm;
    return v;
}

// Concatenation across APs in AP index order.
inline std::vector<double> stack_large_scale(const std::vector<std::vector<double>>& per_ap) {
    if (per_ap.empty())
        throw std::invalid_argument("stack_large_scale: empty input");
    const std::size_t d = per_ap.front().size();
    std::vector<double> out;
    out.reserve(per_ap.size() * d);
    for (const auto& v : per_ap) {
        if (v.size() != d)
            throw std::invalid_argument("stack_large_scale: mismatched per-AP lengths");
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

// Stacked large-scale feature vector for one CSI tensor. Per-AP blocks that
// are exactly zero contribute zero entries (unreachable APs), matching the
// dataset convention for samples with no received signal at an AP.
inline std::vector<double> large_scale_feature(const CsiTensor& csi, FeatureKind kind, int taps) {
    std::vector<std::vector<double>> per_ap;
    per_ap.reserve(csi.per_ap.size());
    for (const CMatrix& block : csi.per_ap) {
        const std::size_t d = feature_dim(kind, block.rows, block.cols, std::size_t(taps));
        if (block.is_zero()) {
            per_ap.push_back(std::vector<double>(d, 0.0));
            continue;
        }
        switch (kind) {
        case FeatureKind::Power:
            per_ap.push_back({feat_power(block, taps)});
            break;
        case FeatureKind::App:
            per_ap.push_back(feat_app(block));
            break;
        case FeatureKind::Dpp:
            per_ap.push_back(feat_dpp(block));
            break;
        case FeatureKind::Cov:
            per_ap.push_back(feat_cov(block));
            break;
        case FeatureKind::Tdp:
            per_ap.push_back(feat_tdp(block, taps));
            break;
        }
    }
    return stack_large_scale(per_ap);
}

// Predefined grid positions paired with their noise-free large-scale
// features, columns indexed by grid point.
struct DtDatabase {
    DtGrid grid;
    Matrix positions; // 2 x P
    Matrix features;  // D_v x P
    FeatureKind kind = FeatureKind::Power;
    int taps = 13;
};

inline DtDatabase build_dt_database(const Scenario& sc, const DtGrid& grid, FeatureKind kind,
                                    int taps) {
    if (grid.size() == 0)
        throw std::invalid_argument("build_dt_database: empty grid");
    const std::size_t p_count = grid.size();

    std::vector<std::vector<double>> cols(p_count);
    parallel_for(p_count, [&](std::size_t p) {
        CsiTensor t;
        t.per_ap = synth_csi(sc, grid.point3(p));
        cols[p] = large_scale_feature(t, kind, taps);
    });

    DtDatabase db;
    db.grid = grid;
    db.kind = kind;
    db.taps = taps;
    db.positions = Matrix(2, p_count);
    for (std::size_t p = 0; p < p_count; ++p) {
        db.positions(0, p) = grid.points[p].x;
        db.positions(1, p) = grid.points[p].y;
    }
    db.features = Matrix(cols.front().size(), p_count);
    for (std::size_t p = 0; p < p_count; ++p) {
        if (cols[p].size() != db.features.rows)
            throw std::runtime_error("build_dt_database: inconsistent feature lengths");
        for (std::size_t i = 0; i < cols[p].size(); ++i)
            db.features(i, p) = cols[p][i];
    }
    return db;
}

} // namespace chartkit
