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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chartkit/geometry.hpp"
#include "chartkit/linalg.hpp"
#include "chartkit/rng.hpp"

namespace chartkit {

struct MlpConfig {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden; // widths of the ReLU layers
    std::size_t output_dim = 0;      // number of predefined grid points P
    double dropout_rate = 0.15;      // inverted dropout on hidden layers
};

struct DenseLayer {
    Matrix w;              // in x out
    std::vector<double> b; // out
};

// MLP with softmax output over the P predefined positions.
struct ChartModel {
    MlpConfig cfg;
    std::vector<DenseLayer> layers;
    std::uint64_t version = 0; // bumped on parameter updates, guards stale caches

    std::size_t param_count() const {
        std::size_t n = 0;
        for (const auto& l : layers)
            n += l.w.size() + l.b.size();
        return n;
    }
};

// He-style uniform fan-in initialization; biases start at zero.
inline ChartModel init_chart_model(const MlpConfig& cfg, Rng& rng) {
    if (cfg.input_dim == 0 || cfg.output_dim == 0)
        throw std::invalid_argument("init_chart_model: zero input or output width");
    if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0)
        throw std::invalid_argument("init_chart_model: dropout rate outside [0,1)");
    ChartModel m;
    m.cfg = cfg;
    std::size_t in = cfg.input_dim;
    std::vector<std::size_t> widths = cfg.hidden;
    widths.push_back(cfg.output_dim);
    for (std::size_t w : widths) {
        DenseLayer layer;
        layer.w = Matrix(in, w);
        layer.b.assign(w, 0.0);
        const double limit = std::sqrt(6.0 / double(in));
        for (auto& x : layer.w.a)
            x = rng.uniform(-limit, limit);
        m.layers.push_back(std::move(layer));
        in = w;
    }
    return m;
}

struct ForwardCache {
    std::vector<Matrix> inputs; // input to each layer, batch-major
    std::vector<Matrix> mask;   // per hidden layer: combined ReLU/dropout multiplier
    Matrix logits;
    Matrix probs;
    bool training = false;
    std::uint64_t model_version = 0;
};

// Batched forward pass. With training=true, hidden activations are masked by
// inverted dropout using draws from `rng`; inference applies no dropout and
// needs no random source.
inline ForwardCache forward_batch(const ChartModel& model, const Matrix& x, bool training,
                                  Rng* rng) {
    if (x.cols != model.cfg.input_dim)
        throw std::invalid_argument("forward_batch: input width mismatch");
    if (training && model.cfg.dropout_rate > 0.0 && rng == nullptr)
        throw std::invalid_argument("forward_batch: training mode needs a random source");

    ForwardCache cache;
    cache.training = training;
    cache.model_version = model.version;

    const std::size_t n_layers = model.layers.size();
    const double rate = model.cfg.dropout_rate;
    const double keep_scale = rate > 0.0 ? 1.0 / (1.0 - rate) : 1.0;

    Matrix cur = x;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const DenseLayer& layer = model.layers[l];
        cache.inputs.push_back(cur);
        Matrix z(cur.rows, layer.w.cols);
        gemm(false, false, 1.0, cur, layer.w, 0.0, z);
        for (std::size_t i = 0; i < z.rows; ++i) {
            double* row = z.row(i);
            for (std::size_t j = 0; j < z.cols; ++j)
                row[j] += layer.b[j];
        }
        if (l + 1 < n_layers) {
            Matrix mask(z.rows, z.cols);
            for (std::size_t i = 0; i < z.size(); ++i) {
                double m = z.a[i] > 0.0 ? 1.0 : 0.0;
                if (training && rate > 0.0)
                    m *= rng->uniform() < rate ? 0.0 : keep_scale;
                mask.a[i] = m;
                z.a[i] *= m; // act = m * z for z > 0, 0 otherwise; d act/dz = m
            }
            cache.mask.push_back(std::move(mask));
            cur = std::move(z);
        } else {
            cache.logits = std::move(z);
        }
    }

    // Row-wise softmax with max subtraction.
    cache.probs = Matrix(cache.logits.rows, cache.logits.cols);
    for (std::size_t i = 0; i < cache.logits.rows; ++i) {
        const double* z = cache.logits.row(i);
        double* p = cache.probs.row(i);
        double zmax = z[0];
        for (std::size_t j = 1; j < cache.logits.cols; ++j)
            zmax = std::max(zmax, z[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < cache.logits.cols; ++j) {
            p[j] = std::exp(z[j] - zmax);
            sum += p[j];
        }
        for (std::size_t j = 0; j < cache.logits.cols; ++j)
            p[j] /= sum;
    }
    return cache;
}

// Single-sample forward; returns the probability vector.
inline std::vector<double> forward(const ChartModel& model, const std::vector<double>& f,
                                   bool training = false, Rng* rng = nullptr) {
    Matrix x(1, f.size());
    x.a = f;
    const ForwardCache cache = forward_batch(model, x, training, rng);
    return cache.probs.a;
}

struct GradientTape {
    std::vector<Matrix> dw;
    std::vector<std::vector<double>> db;
};

inline GradientTape zero_tape(const ChartModel& model) {
    GradientTape t;
    for (const auto& l : model.layers) {
        t.dw.emplace_back(l.w.rows, l.w.cols);
        t.db.emplace_back(l.b.size(), 0.0);
    }
    return t;
}

// Exact reverse-mode gradients of a scalar loss given its gradient with
// respect to the softmax output rows.
inline GradientTape backward(const ChartModel& model, const ForwardCache& cache,
                             const Matrix& dprobs) {
    if (cache.model_version != model.version)
        throw std::invalid_argument("backward: cache is stale, rerun forward");
    if (dprobs.rows != cache.probs.rows || dprobs.cols != cache.probs.cols)
        throw std::invalid_argument("backward: upstream gradient shape mismatch");

    // Softmax Jacobian: dz = p .* (g - <g, p>).
    Matrix dz(dprobs.rows, dprobs.cols);
    for (std::size_t i = 0; i < dprobs.rows; ++i) {
        const double* g = dprobs.row(i);
        const double* p = cache.probs.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < dprobs.cols; ++j)
            s += g[j] * p[j];
        double* d = dz.row(i);
        for (std::size_t j = 0; j < dprobs.cols; ++j)
            d[j] = p[j] * (g[j] - s);
    }

    GradientTape tape = zero_tape(model);
    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const Matrix& input = cache.inputs[l];
        gemm(true, false, 1.0, input, dz, 0.0, tape.dw[l]);
        for (std::size_t i = 0; i < dz.rows; ++i) {
            const double* row = dz.row(i);
            for (std::size_t j = 0; j < dz.cols; ++j)
                tape.db[l][j] += row[j];
        }
        if (l > 0) {
            Matrix dx(dz.rows, model.layers[l].w.rows);
            gemm(false, true, 1.0, dz, model.layers[l].w, 0.0, dx);
            const Matrix& mask = cache.mask[l - 1];
            for (std::size_t i = 0; i < dx.size(); ++i)
                dx.a[i] *= mask.a[i];
            dz = std::move(dx);
        }
    }
    return tape;
}

struct AdamState {
    std::vector<Matrix> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

inline AdamState init_adam(const ChartModel& model) {
    AdamState s;
    for (const auto& l : model.layers) {
        s.m_w.emplace_back(l.w.rows, l.w.cols);
        s.v_w.emplace_back(l.w.rows, l.w.cols);
        s.m_b.emplace_back(l.b.size(), 0.0);
        s.v_b.emplace_back(l.b.size(), 0.0);
    }
    return s;
}

// One Adam update with bias correction; `iteration` is 1-based.
inline void adam_step(ChartModel& model, const GradientTape& tape, AdamState& state, double lr,
                      std::uint64_t iteration) {
    if (tape.dw.size() != model.layers.size())
        throw std::invalid_argument("adam_step: tape shape mismatch");
    const double bc1 = 1.0 - std::pow(state.beta1, double(iteration));
    const double bc2 = 1.0 - std::pow(state.beta2, double(iteration));

    auto update = [&](double& w, double g, double& m, double& v) {
        if (!std::isfinite(g))
            throw std::runtime_error("adam_step: non-finite gradient at iteration " +
                                     std::to_string(iteration));
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g * g;
        w -= lr * (m / bc1) / (std::sqrt(v / bc2) + state.eps);
    };

    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        DenseLayer& layer = model.layers[l];
        if (tape.dw[l].rows != layer.w.rows || tape.dw[l].cols != layer.w.cols ||
            tape.db[l].size() != layer.b.size())
            throw std::invalid_argument("adam_step: tape shape mismatch");
        for (std::size_t i = 0; i < layer.w.size(); ++i)
            update(layer.w.a[i], tape.dw[l].a[i], state.m_w[l].a[i], state.v_w[l].a[i]);
        for (std::size_t i = 0; i < layer.b.size(); ++i)
            update(layer.b[i], tape.db[l][i], state.m_b[l][i], state.v_b[l][i]);
    }
    ++model.version;
}

// Expected position q(p) = X~ p; the result lies in the convex hull of the
// grid points.
inline Vec2 expected_position(const std::vector<double>& probs, const Matrix& grid_xy) {
    if (grid_xy.rows != 2 || grid_xy.cols != probs.size())
        throw std::invalid_argument("expected_position: dimension mismatch");
    Vec2 q{0.0, 0.0};
    for (std::size_t p = 0; p < probs.size(); ++p) {
        q.x += grid_xy(0, p) * probs[p];
        q.y += grid_xy(1, p) * probs[p];
    }
    return q;
}

// Expected large-scale feature u(p) = V~ p.
inline std::vector<double> expected_feature(const std::vector<double>& probs,
                                            const Matrix& features) {
    if (features.cols != probs.size())
        throw std::invalid_argument("expected_feature: dimension mismatch");
    return matvec(features, probs);
}

// Batched q(p): rows of `probs` against the 2 x P grid matrix.
inline Matrix expected_positions_batch(const Matrix& probs, const Matrix& grid_xy) {
    if (grid_xy.rows != 2 || grid_xy.cols != probs.cols)
        throw std::invalid_argument("expected_positions_batch: dimension mismatch");
    Matrix out(probs.rows, 2);
    gemm(false, true, 1.0, probs, grid_xy, 0.0, out);
    return out;
}

// Batched u(p): rows of `probs` against the D_v x P feature matrix.
inline Matrix expected_features_batch(const Matrix& probs, const Matrix& features) {
    if (features.cols != probs.cols)
        throw std::invalid_argument("expected_features_batch: dimension mismatch");
    Matrix out(probs.rows, features.rows);
    gemm(false, true, 1.0, probs, features, 0.0, out);
    return out;
}

} // namespace chartkit
