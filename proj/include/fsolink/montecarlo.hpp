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

#include "fsolink/capacity.hpp"
#include "fsolink/channel.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/rng.hpp"

#include <cmath>
#include <cstdint>

// Seeded simulation oracle. Batches run on sub-streams derived from
// (seed, batch index) and merge associatively, so the estimate is bit-identical
// for any execution order or thread count.

namespace fsolink::mc {

struct SimulationPlan {
    channel::LinkScenario scenario;
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    std::int64_t batch = 10'000;

    void validate() const {
        scenario.validate();
        if (n_samples < 1)
            throw config_error("simulation: n_samples must be >= 1");
        if (batch < 1 || n_samples % batch != 0)
            throw config_error("simulation: batch must divide n_samples");
    }
};

namespace detail {

struct Accumulator {
    double sum = 0.0;
    double sumsq = 0.0;

    void merge(const Accumulator &o) {
        sum += o.sum;
        sumsq += o.sumsq;
    }
};

template <class SampleFn>
inline Accumulator run_batches(const SimulationPlan &plan, const SampleFn &fn) {
    Accumulator total;
    const std::int64_t n_batches = plan.n_samples / plan.batch;
    for (std::int64_t b = 0; b < n_batches; ++b) {
        rng::Stream stream(plan.seed, static_cast<std::uint64_t>(b));
        Accumulator acc;
        for (std::int64_t i = 0; i < plan.batch; ++i) {
            const double x = fn(stream);
            acc.sum += x;
            acc.sumsq += x * x;
        }
        total.merge(acc);
    }
    return total;
}

inline double std_error(const Accumulator &a, std::int64_t n) {
    const double mean = a.sum / n;
    const double var = (a.sumsq / n - mean * mean) * (n / (n - 1.0));
    return std::sqrt(std::max(var, 0.0) / n);
}

} // namespace detail

/// Empirical ergodic capacity: mean of ln(1 + c gamma) over seeded SNR draws.
inline capacity::CapacityEstimate estimate_capacity(const SimulationPlan &plan) {
    plan.validate();
    if (plan.n_samples < 10'000)
        throw config_error("estimate_capacity: needs n_samples >= 1e4");
    const double c = plan.scenario.detection.c;
    const auto acc = detail::run_batches(plan, [&](rng::Stream &stream) {
        return std::log1p(c * channel::snr_sample(plan.scenario, stream));
    });
    return {acc.sum / plan.n_samples, capacity::Method::monte_carlo,
            detail::std_error(acc, plan.n_samples)};
}

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Empirical E[gamma^n] with standard error.
inline MomentEstimate estimate_moment(const SimulationPlan &plan, double n) {
    plan.validate();
    if (!(n >= 0.0))
        throw config_error("estimate_moment: order n must be >= 0");
    if (n == 0.0)
        return {1.0, 0.0};
    const auto acc = detail::run_batches(plan, [&](rng::Stream &stream) {
        return std::exp(n * std::log(channel::snr_sample(plan.scenario, stream)));
    });
    if (!std::isfinite(acc.sumsq))
        throw numeric_error("estimate_moment: variance accumulator overflowed "
                            "(heavy tail at this order)");
    return {acc.sum / plan.n_samples, detail::std_error(acc, plan.n_samples)};
}

} // namespace fsolink::mc
