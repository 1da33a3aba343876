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

#include "chartkit/linalg.hpp"

namespace chartkit {

// Unitary N-point DFT matrix, [F]_{m,k} = exp(-j 2 pi m k / N) / sqrt(N).
// The transform sizes here are small (K <= 8, S <= 64), so transforms are
// explicit matrix products rather than FFTs.
inline CMatrix unitary_dft(std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("unitary_dft: size must be positive");
    CMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(double(n));
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = -2.0 * M_PI * double(m * k % n) / double(n);
            f(m, k) = std::polar(scale, ang);
        }
    }
    return f;
}

// Y = H * F_S^H: inverse unitary DFT across subcarriers (columns of H).
inline CMatrix idft_cols(const CMatrix& h) {
    const std::size_t rows = h.rows, s = h.cols;
    const CMatrix f = unitary_dft(s);
    CMatrix y(rows, s);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < s; ++c) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t j = 0; j < s; ++j)
                acc += h(i, j) * std::conj(f(c, j));
            y(i, c) = acc;
        }
    }
    return y;
}

// Y = F_K * H: unitary DFT across antennas (rows of H).
inline CMatrix dft_rows(const CMatrix& h) {
    const std::size_t k = h.rows, s = h.cols;
    const CMatrix f = unitary_dft(k);
    CMatrix y(k, s);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t c = 0; c < s; ++c) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t j = 0; j < k; ++j)
                acc += f(i, j) * h(j, c);
            y(i, c) = acc;
        }
    }
    return y;
}

// Energy of the first C delay taps: ||vec([H F_S^H]_{:,1:C})||^2.
inline double truncated_tap_energy(const CMatrix& h, int taps) {
    if (taps < 1 || std::size_t(taps) > h.cols)
        throw std::invalid_argument("truncated_tap_energy: taps outside [1, S]");
    const CMatrix y = idft_cols(h);
    double e = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i)
        for (std::size_t c = 0; c < std::size_t(taps); ++c)
            e += std::norm(y(i, c));
    return e;
}

} // namespace chartkit
