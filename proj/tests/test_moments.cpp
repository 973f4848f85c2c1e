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

#include "fsolink/moments.hpp"
#include "fsolink/montecarlo.hpp"

#include <cmath>

using namespace fsolink;
using namespace fsolink::channel;

namespace {

const Malaga kPaperMalaga{2.296, 2, 0.1079, 0.596, 1.3265, 1.5707963267948966};

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

std::vector<TurbulenceModel> all_models() {
    return {Lognormal::unit_mean(0.35), RicianLognormal::unit_mean(5.0, 0.35), kPaperMalaga,
            GammaGamma{8.0, 4.0}};
}

LinkScenario make(const TurbulenceModel &m, double s, int r, double mu) {
    LinkScenario sc;
    sc.turbulence = m;
    sc.pointing = {1.1, 3.0, s, 1.0};
    sc.detection = Detection::from_r(r);
    sc.mu_r = mu;
    return sc;
}

} // namespace

TEST_CASE("moment: n = 0 is exactly 1") {
    for (const auto &m : all_models())
        for (double s : {0.0, 3.0})
            for (int r : {1, 2})
                CHECK(moments::moment(make(m, s, r, 123.4), 0.0) == 1.0);
}

TEST_CASE("moment: heterodyne first moment equals mu_1 exactly") {
    for (const auto &m : all_models())
        for (double s : {0.0, 3.0}) {
            const auto sc = make(m, s, 1, 7.25);
            CHECK(rel(moments::moment(sc, 1.0), 7.25) < 1e-12);
        }
}

TEST_CASE("moment: frozen LN and Malaga values") {
    // mpmath, LN sigma=0.35, xi=1.1, s=3, sigma_s=3, r=2, mu_2=1, n=1
    const auto ln_sc = make(Lognormal::unit_mean(0.35), 3.0, 2, 1.0);
    CHECK(rel(moments::moment(ln_sc, 1.0), 1.63649366247238607) < 1e-12);

    // mpmath, Malaga paper params, xi=1.1, s=0, r=2, mu_2=1, n=2
    const auto mal_sc = make(kPaperMalaga, 0.0, 2, 1.0);
    CHECK(rel(moments::moment(mal_sc, 2.0), 136.828929503162707) < 1e-11);
}

TEST_CASE("moment: Monte-Carlo agreement at n = 1, 2") {
    // one 3-sigma outlier allowed across the 16 cells (z is not exactly normal
    // for the skewed gamma^2 summand at 1e6 samples)
    int outliers = 0;
    for (const auto &m : all_models())
        for (int r : {1, 2}) {
            const auto sc = make(m, 3.0, r, 2.5);
            for (double n : {1.0, 2.0}) {
                const auto est = mc::estimate_moment({sc, 1'000'000, 814, 10'000}, n);
                const double closed = moments::moment(sc, n);
                if (std::fabs(est.mean - closed) >= 3.0 * est.std_error) {
                    ++outliers;
                    CHECK(std::fabs(est.mean - closed) < 5.0 * est.std_error);
                }
            }
        }
    CHECK(outliers <= 2);
}

TEST_CASE("moment: boresight continuity at s -> 0") {
    for (const auto &m : all_models())
        for (int r : {1, 2})
            for (double n : {0.5, 1.0, 2.0, 3.0}) {
                const double with_eps =
                    moments::ln_moment(make(m, 1e-300, r, 5.0), n);
                const double at_zero = moments::ln_moment(make(m, 0.0, r, 5.0), n);
                CHECK(std::fabs(with_eps - at_zero) < 1e-12);
            }
}

TEST_CASE("moment: Malaga converges to GG as rho -> 1, Omega' = 1") {
    // g = 2 b0 (1 - rho) = 1e-12 with b0 = 0.5; Omega chosen so Omega' = 1
    Malaga lim;
    lim.alpha = 8.0;
    lim.beta = 4;
    lim.b0 = 0.5;
    lim.rho = 1.0 - 1e-12;
    lim.omega_los = 1.0 - 2.0 * lim.b0 * lim.rho;
    lim.delta_phi = 1.5707963267948966;
    const GammaGamma gg{8.0, 4.0};
    for (int r : {1, 2})
        for (double n : {1.0, 2.0, 3.0}) {
            const double a = moments::moment(make(lim, 0.0, r, 3.0), n);
            const double b = moments::moment(make(gg, 0.0, r, 3.0), n);
            CHECK(rel(a, b) < 1e-6);
        }
}

TEST_CASE("moment: RLN converges to LN as k -> infinity") {
    const auto rln = RicianLognormal::unit_mean(1000.0, 0.35);
    const auto ln = Lognormal::unit_mean(0.35);
    for (int r : {1, 2})
        for (double n : {1.0, 2.0}) {
            const double a = moments::moment(make(rln, 3.0, r, 4.0), n);
            const double b = moments::moment(make(ln, 3.0, r, 4.0), n);
            CHECK(rel(a, b) < 1e-4);
        }
    // frozen check of the k > sqrt(200) branch at integer j = 4:
    // Gamma(5) 1F1(-4;1;-1e6)/(1+1e6)^4 = 1.00001200001799995
    CHECK(rel(std::exp(moments::detail::ln_rician_ratio(4.0, 1000.0)),
              1.00001200001799995) < 1e-12);
    // non-integer j beside it stays continuous
    CHECK(rel(std::exp(moments::detail::ln_rician_ratio(4.0 + 1e-9, 1000.0)),
              1.00001200001799995) < 1e-7);
}

TEST_CASE("moment: log-convex in the order (Lyapunov)") {
    for (const auto &m : all_models())
        for (int r : {1, 2}) {
            const auto sc = make(m, 3.0, r, 0.8);
            const double h = 0.25;
            for (double n = h; n + h <= 4.0; n += h) {
                const double second = moments::ln_moment(sc, n + h) -
                                      2.0 * moments::ln_moment(sc, n) +
                                      moments::ln_moment(sc, n - h);
                CHECK(second > -1e-9);
            }
        }
}

TEST_CASE("amount_of_fading") {
    // n = 1 is identically zero
    for (const auto &m : all_models())
        CHECK(moments::amount_of_fading(make(m, 3.0, 2, 9.0), 1) == 0.0);

    // deterministic limit: sigma -> 0, k -> inf, xi -> inf
    LinkScenario det = make(RicianLognormal{1000.0, 1.0, 1e-6, -5e-13}, 0.0, 2, 9.0);
    det.pointing = {1e6, 3.0, 0.0, 1.0};
    CHECK(std::fabs(moments::amount_of_fading(det, 2)) < 1e-4);

    // GG alpha=8, beta=4, no pointing errors, r=1:
    // AF(2) = (1+1/8)(1+1/4) - 1 = 0.40625
    LinkScenario gg = make(GammaGamma{8.0, 4.0}, 0.0, 1, 9.0);
    gg.pointing = {1e9, 3.0, 0.0, 1.0};
    CHECK(std::fabs(moments::amount_of_fading(gg, 2) - 0.40625) < 1e-9);

    CHECK_THROWS_AS(moments::amount_of_fading(gg, 0), config_error);
}

TEST_CASE("average_to_electrical_snr") {
    // r = 1: identity
    const auto het = make(all_models()[1], 3.0, 1, 1.0);
    CHECK(moments::average_to_electrical_snr(het, 7.0) == 7.0);

    // r = 2, GG(8,4), no pointing: factor 1/((1+1/8)(1+1/4))
    LinkScenario gg = make(GammaGamma{8.0, 4.0}, 0.0, 2, 1.0);
    gg.pointing = {1e9, 3.0, 0.0, 1.0};
    CHECK(rel(moments::average_to_electrical_snr(gg, 1.0), 1.0 / 1.40625) < 1e-9);

    // exact round trip
    for (const auto &m : all_models()) {
        const auto sc = make(m, 3.0, 2, 1.0);
        const double mu = moments::average_to_electrical_snr(sc, 123.0);
        CHECK(rel(moments::electrical_to_average_snr(sc, mu), 123.0) < 1e-12);
    }
    CHECK_THROWS_AS(moments::average_to_electrical_snr(gg, 0.0), config_error);
}

TEST_CASE("moment: randomized parameter property sweep") {
    // hand-rolled generator: 60 random scenarios, checking the structural
    // invariants that must hold for any parameter draw
    rng::Stream gen(20260810);
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * gen.next_uniform(); };
    for (int trial = 0; trial < 60; ++trial) {
        TurbulenceModel m;
        switch (static_cast<int>(uni(0.0, 4.0))) {
        case 0: m = Lognormal::unit_mean(uni(0.05, 0.9)); break;
        case 1: m = RicianLognormal::unit_mean(uni(0.2, 12.0), uni(0.05, 0.9)); break;
        case 2: {
            Malaga t;
            t.alpha = uni(0.8, 9.0);
            t.beta = 1 + static_cast<int>(uni(0.0, 4.0));
            t.b0 = uni(0.02, 0.8);
            t.rho = uni(0.05, 0.95);
            t.omega_los = uni(0.2, 2.0);
            t.delta_phi = uni(0.0, 3.14);
            m = t;
            break;
        }
        default: m = GammaGamma{uni(0.6, 9.0), uni(0.6, 9.0)}; break;
        }
        LinkScenario sc;
        sc.turbulence = m;
        sc.pointing = {uni(0.5, 8.0), uni(0.5, 5.0), uni(0.0, 5.0), 1.0};
        sc.detection = Detection::from_r(1 + static_cast<int>(uni(0.0, 2.0)));
        sc.mu_r = std::exp(uni(-3.0, 8.0));

        CHECK(moments::moment(sc, 0.0) == 1.0);
        if (sc.detection.r == 1)
            CHECK(rel(moments::moment(sc, 1.0), sc.mu_r) < 1e-12);
        // Lyapunov convexity of ln E[gamma^n] at a random interior point
        const double n0 = uni(0.3, 3.0), h = 0.2;
        CHECK(moments::ln_moment(sc, n0 + h) + moments::ln_moment(sc, n0 - h) -
                  2.0 * moments::ln_moment(sc, n0) >
              -1e-9);
        // boresight continuity
        LinkScenario eps = sc;
        eps.pointing.s = 1e-300;
        LinkScenario zs = sc;
        zs.pointing.s = 0.0;
        CHECK(std::fabs(moments::ln_moment(eps, 2.0) - moments::ln_moment(zs, 2.0)) < 1e-12);
    }
}

TEST_CASE("moment: overflow reporting") {
    const auto sc = make(GammaGamma{8.0, 4.0}, 0.0, 2, 1e30);
    CHECK_THROWS_AS(moments::moment(sc, 30.0), numeric_error);
    CHECK(std::isfinite(moments::ln_moment(sc, 30.0))); // log-space path stays finite
}
