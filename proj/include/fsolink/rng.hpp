// SPDX-License-Identifier: Apache-2.0
//
// fsolink: free-space optical link capacity and channel statistics
// Copyright (C) 2026 fsolink contributors
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

namespace fsolink::rng {

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based 64-bit stream. Sub-streams derived from (seed, stream) are
/// statistically independent, so parallel batches reproduce the same output
/// for any scheduling. A single Stream object must not be shared across
/// threads.
class Stream {
  public:
    explicit Stream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(detail::mix(seed ^ detail::mix(stream + 0x633d5c4b871f6a21ULL))) {}

    std::uint64_t next_u64() { return detail::mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform on (0, 1]: never returns 0, safe under log().
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal (Box-Muller, pair cached).
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        cached_ = rad * std::sin(ang);
        have_cached_ = true;
        return rad * std::cos(ang);
    }

    /// Gamma variate, shape > 0, unit scale (Marsaglia-Tsang; boost for shape < 1).
    double next_gamma(double shape) {
        if (shape < 1.0) {
            const double u = next_uniform();
            return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = next_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2)
                return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace fsolink::rng
