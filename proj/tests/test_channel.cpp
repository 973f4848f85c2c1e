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

#include <catch2/catch_amalgamated.hpp>

#include "fsolink/channel.hpp"
#include "fsolink/moments.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fsolink;
using namespace fsolink::channel;

namespace {

const Malaga kPaperMalaga{2.296, 2, 0.1079, 0.596, 1.3265, 1.5707963267948966};

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

struct MeanVar {
    double mean, se;
};

template <class F> MeanVar sample_stats(std::int64_t n, std::uint64_t seed, F draw) {
    rng::Stream stream(seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = draw(stream);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = (sumsq / n - mean * mean) * n / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

} // namespace

TEST_CASE("pointing_pdf: uniform special case and frozen value") {
    // s = 0, xi = 1, A0 = 1 makes f_p(ip) = 1 on (0, 1]
    PointingErrorParams uni{1.0, 3.0, 0.0, 1.0};
    CHECK(rel(pointing_pdf(uni, 0.5), 1.0) < 1e-14);
    CHECK(rel(pointing_pdf(uni, 0.015), 1.0) < 1e-14);

    // mpmath: f_p(0.9) = 0.764334186386768955 at s=3, sigma_s=3, xi=1.1
    PointingErrorParams bs{1.1, 3.0, 3.0, 1.0};
    CHECK(rel(pointing_pdf(bs, 0.9), 0.764334186386768955) < 1e-10);

    CHECK_THROWS_AS(pointing_pdf(bs, 0.0), std::domain_error);
    CHECK_THROWS_AS(pointing_pdf(bs, 1.0001), std::domain_error);
}

TEST_CASE("pointing_pdf: integrates to one") {
    for (const auto &p : {PointingErrorParams{1.1, 3.0, 0.0, 1.0},
                          PointingErrorParams{1.1, 3.0, 3.0, 1.0},
                          PointingErrorParams{6.7, 1.5, 3.0, 1.0},
                          PointingErrorParams{2.1, 2.0, 5.0, 0.8}}) {
        const double total = quad::integrate(
            [&](double ip) { return ip > 0.0 && ip <= p.a0 ? pointing_pdf(p, ip) : 0.0; },
            1e-14, p.a0, 1e-10);
        CHECK(std::fabs(total - 1.0) < 1e-8);
    }
}

TEST_CASE("sample_pointing: moments match the closed form") {
    // E[I_p] = A0 xi^2/(xi^2+1) exp(-s^2/(2 sigma_s^2 (xi^2+1)))
    for (double s : {0.0, 3.0}) {
        PointingErrorParams p{1.1, 3.0, s, 1.0};
        const auto st = sample_stats(1'000'000, 42, [&](rng::Stream &g) {
            const double ip = sample_pointing(p, g);
            REQUIRE(ip > 0.0);
            REQUIRE(ip <= p.a0);
            return ip;
        });
        CHECK(rel(st.mean, mean_pointing(p)) < 0.01);
    }
}

TEST_CASE("sample_turbulence: closed-form moments reproduced") {
    const TurbulenceModel ln = Lognormal::unit_mean(0.35);
    auto st = sample_stats(1'000'000, 7, [&](rng::Stream &g) { return sample_turbulence(ln, g); });
    CHECK(rel(st.mean, 1.0) < 0.01);

    const TurbulenceModel mal = kPaperMalaga;
    // closed-form Malaga moments: E[I] = g + Omega', E[I^2]/E^2[I] from the moment ratio
    const double mean_want = mean_turbulence(mal);
    st = sample_stats(1'000'000, 8, [&](rng::Stream &g) { return sample_turbulence(mal, g); });
    CHECK(rel(st.mean, mean_want) < 0.02);
    auto st2 = sample_stats(1'000'000, 9, [&](rng::Stream &g) {
        const double x = sample_turbulence(mal, g);
        return x * x;
    });
    const double ratio_want = std::exp(moments::detail::ln_turb_ratio(mal, 2.0));
    CHECK(rel(st2.mean / (mean_want * mean_want), ratio_want) < 0.02);

    const TurbulenceModel gg = GammaGamma{8.0, 4.0};
    st = sample_stats(1'000'000, 10, [&](rng::Stream &g) { return sample_turbulence(gg, g); });
    auto stgg2 = sample_stats(1'000'000, 10, [&](rng::Stream &g) {
        const double x = sample_turbulence(gg, g);
        return x * x;
    });
    // E[I^2]/E^2[I] = (1 + 1/8)(1 + 1/4) = 1.40625
    CHECK(rel(stgg2.mean / (st.mean * st.mean), 1.40625) < 0.01);
}

TEST_CASE("turbulence_pdf: normalization for every model") {
    const std::vector<TurbulenceModel> models = {
        Lognormal::unit_mean(0.35), RicianLognormal::unit_mean(5.0, 0.35), kPaperMalaga,
        GammaGamma{2.296, 2.0}};
    for (const auto &m : models) {
        const double total = quad::integrate_semi_infinite(
            [&](double x) { return x > 0.0 ? turbulence_pdf(m, x) : 0.0; }, 1e-13, 1e-8);
        CHECK(std::fabs(total - 1.0) < 1e-6);
    }
    CHECK_THROWS_AS(turbulence_pdf(models[0], 0.0), std::domain_error);
}

TEST_CASE("turbulence_pdf: lognormal mode") {
    const Lognormal t = Lognormal::unit_mean(0.35);
    const double mode = std::exp(t.lambda - t.sigma * t.sigma);
    const TurbulenceModel m = t;
    const double at_mode = turbulence_pdf(m, mode);
    CHECK(at_mode > turbulence_pdf(m, mode * 1.05));
    CHECK(at_mode > turbulence_pdf(m, mode * 0.95));
}

TEST_CASE("malaga sampler matches the density (KS)") {
    const TurbulenceModel m = kPaperMalaga;
    const std::int64_t n = 1'000'000;
    std::vector<double> xs(n);
    rng::Stream stream(123);
    for (auto &x : xs)
        x = sample_turbulence(m, stream);
    std::sort(xs.begin(), xs.end());

    // analytic CDF on a grid spanning the sample range, then sup difference
    const int grid_n = 160;
    double ks = 0.0, cdf = 0.0, lo = 1e-9;
    for (int gi = 1; gi <= grid_n; ++gi) {
        const double hi = xs[static_cast<std::size_t>(
            std::min<double>(n - 1.0, std::floor(static_cast<double>(gi) / grid_n * (n - 1))))];
        if (hi <= lo)
            continue;
        cdf += quad::integrate([&](double x) { return turbulence_pdf(m, x); }, lo, hi, 1e-8);
        const double emp =
            static_cast<double>(std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin()) / n;
        ks = std::max(ks, std::fabs(cdf - emp));
        lo = hi;
    }
    CHECK(ks < 0.005);
}

TEST_CASE("composite_pdf: LN zero-boresight closed form vs defining integral") {
    const TurbulenceModel m = Lognormal::unit_mean(0.35);
    const PointingErrorParams p{1.1, 3.0, 0.0, 1.0};
    for (double i : {0.05, 0.2, 0.5, 0.9, 1.4}) {
        const double closed = composite_pdf(m, p, i);
        // oracle: direct quadrature of f(i) = int f_a(z) f_p(i/z)/z dz
        const double oracle = quad::integrate_semi_infinite(
            [&](double z) {
                const double ip = i / z;
                if (!(ip > 0.0) || ip > p.a0)
                    return 0.0;
                return turbulence_pdf(m, z) * pointing_pdf(p, ip) / z;
            },
            i / p.a0, 1e-10);
        CHECK(rel(closed, oracle) < 1e-7);
    }
}

TEST_CASE("composite_pdf: normalization for all models") {
    const PointingErrorParams zero_bs{1.1, 3.0, 0.0, 1.0};
    const PointingErrorParams with_bs{1.1, 3.0, 3.0, 1.0};

    const auto total = [](const TurbulenceModel &m, const PointingErrorParams &p) {
        return quad::integrate_semi_infinite(
            [&](double i) { return i > 0.0 ? composite_pdf(m, p, i) : 0.0; }, 1e-13, 1e-7);
    };
    CHECK(std::fabs(total(Lognormal::unit_mean(0.35), zero_bs) - 1.0) < 1e-6);
    CHECK(std::fabs(total(Lognormal::unit_mean(0.35), with_bs) - 1.0) < 1e-6);
    CHECK(std::fabs(total(GammaGamma{2.296, 2.0}, with_bs) - 1.0) < 1e-6);
    CHECK(std::fabs(total(kPaperMalaga, zero_bs) - 1.0) < 1e-6);
    CHECK(std::fabs(total(RicianLognormal::unit_mean(5.0, 0.35), with_bs) - 1.0) < 1e-5);
    CHECK_THROWS_AS(composite_pdf(kPaperMalaga, zero_bs, 0.0), std::domain_error);
}

TEST_CASE("snr_sample: first moments and preconditions") {
    LinkScenario sc;
    sc.turbulence = RicianLognormal::unit_mean(5.0, 0.35);
    sc.pointing = {1.1, 3.0, 3.0, 1.0};
    sc.detection = Detection::heterodyne();
    sc.mu_r = 7.0;
    auto st = sample_stats(1'000'000, 21, [&](rng::Stream &g) { return snr_sample(sc, g); });
    CHECK(rel(st.mean, 7.0) < 0.01); // r=1: E[gamma] = mu_1

    sc.detection = Detection::im_dd();
    sc.mu_r = 3.0;
    st = sample_stats(1'000'000, 22, [&](rng::Stream &g) { return snr_sample(sc, g); });
    const double want = 3.0 * moments::snr_moment_ratio(sc); // E[gamma_2] = mu_2 E[I^2]/E^2[I]
    CHECK(rel(st.mean, want) < 0.02);

    sc.mu_r = 0.0;
    rng::Stream g(1);
    CHECK_THROWS_AS(snr_sample(sc, g), config_error);
}

TEST_CASE("zero-boresight reduction: s -> 0 equals the s = 0 branch") {
    PointingErrorParams s0{1.1, 3.0, 0.0, 1.0};
    PointingErrorParams s_eps{1.1, 3.0, 1e-300, 1.0};
    for (double ip : {0.1, 0.5, 0.99})
        CHECK(rel(pointing_pdf(s_eps, ip), pointing_pdf(s0, ip)) < 1e-12);
    CHECK(rel(mean_pointing(s_eps), mean_pointing(s0)) < 1e-12);
}

TEST_CASE("determinism: identical seed, identical stream") {
    const TurbulenceModel m = kPaperMalaga;
    rng::Stream a(777), b(777);
    for (int i = 0; i < 200; ++i)
        CHECK(sample_turbulence(m, a) == sample_turbulence(m, b));
    // distinct sub-streams differ
    rng::Stream c(777, 1);
    bool any_diff = false;
    rng::Stream a2(777);
    for (int i = 0; i < 8; ++i)
        any_diff |= (sample_turbulence(m, a2) != sample_turbulence(m, c));
    CHECK(any_diff);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PointingErrorParams({-1.0, 3.0, 0.0, 1.0}).validate(), config_error);
    CHECK_THROWS_AS(PointingErrorParams({1.0, 3.0, 0.0, 1.5}).validate(), config_error);
    const Lognormal wide{1.2, -0.72}; // sigma^2 >= 1
    CHECK_THROWS_AS(wide.validate(), config_error);
    CHECK_THROWS_AS(Malaga({2.0, 0, 0.1, 0.5, 1.0, 0.0}).validate(), config_error);
    CHECK_THROWS_AS(Detection::from_r(3), config_error);
    Detection d{2, 1.0}; // c inconsistent with r
    CHECK_THROWS_AS(d.validate(), config_error);
}
