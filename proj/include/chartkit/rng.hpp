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
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace chartkit {

// Seeded random source. Gaussian variates use an explicit Box-Muller
// transform instead of std::normal_distribution because the standard leaves
// that algorithm implementation-defined and the dataset contracts require
// bit-identical streams for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0)
            throw std::invalid_argument("Rng::uniform_index: n must be positive");
        // Rejection to avoid modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal variate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return engine_(); }

    // The text format of mt19937_64 is pinned by the standard, so the state
    // round-trips across standard library implementations.
    std::string serialize() const {
        std::ostringstream os;
        os << engine_ << ' ' << (have_spare_ ? 1 : 0) << ' ';
        os.precision(17);
        os << spare_;
        return os.str();
    }

    static Rng deserialize(const std::string& text) {
        Rng r;
        std::istringstream is(text);
        int spare_flag = 0;
        is >> r.engine_ >> spare_flag >> r.spare_;
        if (!is)
            throw std::runtime_error("Rng::deserialize: malformed state string");
        r.have_spare_ = spare_flag != 0;
        return r;
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace chartkit
