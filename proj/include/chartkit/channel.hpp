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
#include <vector>

#include "chartkit/dft.hpp"
#include "chartkit/image_source.hpp"
#include "chartkit/linalg.hpp"
#include "chartkit/rng.hpp"
#include "chartkit/scenario.hpp"

namespace chartkit {

// Estimated CSI at one timestamp: one K x S block per AP.
struct CsiTensor {
    std::vector<CMatrix> per_ap;
    double timestamp = 0.0;
};

// Synthesize the per-AP K x S channel matrices for a UE at `ue_pos` with the
// image-source model. Each valid path contributes
//   coeff * lambda/(4 pi d) * exp(-j 2 pi f_s d / c) * a_k(arrival)
// where a_k is the plane-wave array factor of element k at the carrier
// wavelength. Paths crossing an opaque wall are excluded.
inline std::vector<CMatrix> synth_csi(const Scenario& sc, const Vec3& ue_pos) {
    sc.validate();
    if (!inside_floor_plan(sc, ue_pos.xy()))
        throw std::invalid_argument("synth_csi: UE position outside the floor plan");

    const int s_count = sc.num_subcarriers;
    const double lambda_c = sc.wavelength();
    const double f0 = sc.subcarrier_freq(0);
    const double delta_f = sc.bandwidth_hz / double(s_count);

    const auto images = build_image_sources(sc, ue_pos, sc.max_reflection_order);

    std::vector<CMatrix> out;
    out.reserve(sc.aps.size());
    for (std::size_t a = 0; a < sc.aps.size(); ++a) {
        const ApConfig& ap = sc.aps[a];
        const int k_count = ap.num_elements;
        for (int k = 0; k < k_count; ++k) {
            if (norm(ue_pos - sc.ap_element_position(a, k)) <= 1e-9)
                throw std::invalid_argument("synth_csi: UE coincides with an AP antenna element");
        }

        CMatrix h(std::size_t(k_count), std::size_t(s_count));
        std::vector<std::complex<double>> tap(std::size_t(s_count));
        for (const ImageSource& img : images) {
            if (img.coeff == 0.0)
                continue;
            const auto path = trace_path(sc, img, ue_pos, ap.position);
            if (!path)
                continue;
            const double d = path->length;
            const double amp = path->coeff * lambda_c / (4.0 * M_PI * d);

            // Per-subcarrier phase by recurrence over the centered OFDM grid.
            const std::complex<double> step = std::polar(1.0, -2.0 * M_PI * delta_f * d / kSpeedOfLight);
            std::complex<double> phase = std::polar(amp, -2.0 * M_PI * f0 * d / kSpeedOfLight);
            for (int s = 0; s < s_count; ++s) {
                tap[std::size_t(s)] = phase;
                phase *= step;
            }

            for (int k = 0; k < k_count; ++k) {
                const Vec3 offset = sc.ap_element_position(a, k) - ap.position;
                const std::complex<double> elem =
                    std::polar(1.0, 2.0 * M_PI * dot(offset, path->arrival_dir) / lambda_c);
                std::complex<double>* row = &h(std::size_t(k), 0);
                for (int s = 0; s < s_count; ++s)
                    row[s] += elem * tap[std::size_t(s)];
            }
        }
        out.push_back(std::move(h));
    }
    return out;
}

// Add i.i.d. circular complex Gaussian noise to every nonzero per-AP block.
// A single variance is picked so that the maximum over (a, n) of
// ||h^(a,n)||^2 / sigma^2 equals the requested SNR, with h the block's first
// `truncated_taps` delay taps. Blocks that are exactly zero stay zero.
// Returns the chosen noise variance.
inline double add_awgn(std::vector<CsiTensor>& data, double target_max_snr_db, int truncated_taps,
                       std::uint64_t seed) {
    double max_energy = 0.0;
    for (const CsiTensor& t : data)
        for (const CMatrix& block : t.per_ap)
            if (!block.is_zero())
                max_energy = std::max(max_energy, truncated_tap_energy(block, truncated_taps));
    if (max_energy <= 0.0)
        throw std::invalid_argument("add_awgn: every per-AP block is zero, SNR undefined");

    const double sigma2 = max_energy / std::pow(10.0, target_max_snr_db / 10.0);
    const double sd = std::sqrt(0.5 * sigma2);

    Rng rng(seed);
    for (CsiTensor& t : data) {
        for (CMatrix& block : t.per_ap) {
            if (block.is_zero())
                continue;
            for (auto& z : block.a)
                z += std::complex<double>(sd * rng.gaussian(), sd * rng.gaussian());
        }
    }
    return sigma2;
}

} // namespace chartkit
