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

#include "fsolink/channel.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/specfun.hpp"

#include <cmath>
#include <vector>

// Exact closed-form moments of the end-to-end SNR,
//   E[gamma^n] = mu_r^n * E[I_a^{rn}] E[I_p^{rn}] / (E[I_a]^{rn} E[I_p]^{rn}),
// assembled entirely in log space. The n = 0 derivative of these expressions
// is the high-SNR capacity bracket, so non-integer n must evaluate cleanly
// down to n ~ 1e-6.

namespace fsolink::moments {

struct MomentQuery {
    channel::LinkScenario scenario;
    double n = 1.0;

    void validate() const {
        scenario.validate();
        if (!(n >= 0.0))
            throw config_error("moment: order n must be >= 0");
    }
};

namespace detail {

/// ln of E[I_p^j] / E[I_p]^j (boresight-aware); j = r*n.
inline double ln_pointing_ratio(const channel::PointingErrorParams &p, double j) {
    const double xi2 = p.xi * p.xi;
    double v = (1.0 - j) * std::log(xi2) + j * std::log(xi2 + 1.0) - std::log(xi2 + j);
    if (p.s > 0.0)
        v += j * p.s * p.s / (2.0 * p.sigma_s * p.sigma_s) *
             (1.0 / (xi2 + 1.0) - 1.0 / (xi2 + j));
    return v;
}

/// ln of Gamma(j+1) 1F1(-j; 1; -k^2) / (k^2+1)^j, the normalized Rician power
/// moment. Integer j uses the terminating Laguerre sum (valid for any k);
/// non-integer j goes through the Kummer transform, with the large-argument
/// asymptotic beyond its k^2 <= 200 window.
inline double ln_rician_ratio(double j, double k) {
    const double w = k * k;
    const double ln1pw = std::log1p(w);
    const double ji = std::nearbyint(j);
    if (std::fabs(j - ji) < 1e-12 && ji >= 0.0 && ji <= 170.0) {
        // Gamma(j+1) L_j(-w) = j! sum_m C(j,m) w^m / m!, all terms positive
        const int n = static_cast<int>(ji);
        if (n == 0)
            return 0.0;
        std::vector<double> ln_terms(n + 1);
        double mx = -1e300;
        for (int m = 0; m <= n; ++m) {
            const double lt = 2.0 * specfun::ln_gamma(n + 1.0) -
                              specfun::ln_gamma(m + 1.0) - specfun::ln_gamma(n - m + 1.0) -
                              specfun::ln_gamma(m + 1.0) + m * std::log(w);
            ln_terms[m] = lt;
            mx = std::max(mx, lt);
        }
        double acc = 0.0;
        for (double lt : ln_terms)
            acc += std::exp(lt - mx);
        return mx + std::log(acc) - j * ln1pw;
    }
    if (w <= 200.0)
        return specfun::ln_gamma(j + 1.0) +
               std::log(specfun::kummer_1f1(-j, 1.0, -w)) - j * ln1pw;
    // Gamma(j+1) 1F1(-j;1;-w) / (1+w)^j = 1 + j(j-1)/w + c2/w^2 + O(w^-3)
    const double c2 = 0.5 * j * j * (j - 1.0) * (j - 1.0) - j * j * j + 0.5 * j * (j + 1.0);
    return std::log1p(j * (j - 1.0) / w + c2 / (w * w));
}

/// ln of E[I_a^j] / E[I_a]^j for each turbulence model; j = r*n.
/// For Malaga the spec's r 2^{-r} prefactor equals 1/2 for r in {1,2}, so the
/// ratio is written model-only (r enters through j alone).
inline double ln_turb_ratio(const channel::TurbulenceModel &m, double j) {
    struct Visitor {
        double j;
        double operator()(const channel::Lognormal &t) const {
            return 0.5 * j * (j - 1.0) * t.sigma * t.sigma;
        }
        double operator()(const channel::RicianLognormal &t) const {
            return 0.5 * j * (j - 1.0) * t.sigma * t.sigma + ln_rician_ratio(j, t.k);
        }
        double operator()(const channel::Malaga &t) const {
            const channel::MalagaDerived d(t);
            // E[I^j] = (A/2) B0^{-j} Gamma(j+alpha) sum_m b_m Gamma(j+m); E[I] = B/B0
            double mx = -1e300;
            std::vector<double> lt(t.beta);
            for (int mm = 1; mm <= t.beta; ++mm) {
                lt[mm - 1] = d.ln_b[mm - 1] + specfun::ln_gamma(j + mm);
                mx = std::max(mx, lt[mm - 1]);
            }
            double acc = 0.0;
            for (double v : lt)
                acc += std::exp(v - mx);
            return d.ln_big_a - std::log(2.0) + specfun::ln_gamma(j + t.alpha) + mx +
                   std::log(acc) - j * std::log(d.big_b);
        }
        double operator()(const channel::GammaGamma &t) const {
            return specfun::ln_gamma(j + t.alpha) + specfun::ln_gamma(j + t.beta) -
                   specfun::ln_gamma(t.alpha) - specfun::ln_gamma(t.beta) -
                   j * std::log(t.alpha * t.beta);
        }
    };
    return std::visit(Visitor{j}, m);
}

} // namespace detail

/// ln E[gamma^n]; never overflows.
inline double ln_moment(const channel::LinkScenario &sc, double n) {
    if (!(n >= 0.0))
        throw config_error("moment: order n must be >= 0");
    if (n == 0.0)
        return 0.0;
    const double j = sc.detection.r * n;
    return n * std::log(sc.mu_r) + detail::ln_pointing_ratio(sc.pointing, j) +
           detail::ln_turb_ratio(sc.turbulence, j);
}

/// E[gamma^n]; throws numeric_error if the result is not representable.
inline double moment(const MomentQuery &q) {
    q.validate();
    const double lm = ln_moment(q.scenario, q.n);
    if (lm > 709.0)
        throw numeric_error("moment: result overflows double; use ln_moment");
    return std::exp(lm);
}

inline double moment(const channel::LinkScenario &sc, double n) {
    return moment(MomentQuery{sc, n});
}

/// n-th order amount of fading: E[gamma^n]/E[gamma]^n - 1.
inline double amount_of_fading(const channel::LinkScenario &sc, int n) {
    if (n < 1)
        throw config_error("amount_of_fading: n must be >= 1");
    return std::expm1(ln_moment(sc, n) - n * ln_moment(sc, 1.0));
}

/// E[I^2]/E^2[I] for the scenario's fading (model x pointing), detection-free.
inline double snr_moment_ratio(const channel::LinkScenario &sc) {
    return std::exp(detail::ln_pointing_ratio(sc.pointing, 2.0) +
                    detail::ln_turb_ratio(sc.turbulence, 2.0));
}

/// Average SNR -> electrical SNR. Identity for heterodyne; divides by
/// E[I^2]/E^2[I] for IM/DD. Exactly invertible.
inline double average_to_electrical_snr(const channel::LinkScenario &sc, double gamma_bar) {
    if (!(gamma_bar > 0.0))
        throw config_error("average_to_electrical_snr: gamma_bar must be > 0");
    if (sc.detection.r == 1)
        return gamma_bar;
    return gamma_bar / snr_moment_ratio(sc);
}

/// Electrical SNR -> average SNR (inverse of the above).
inline double electrical_to_average_snr(const channel::LinkScenario &sc, double mu_r) {
    if (!(mu_r > 0.0))
        throw config_error("electrical_to_average_snr: mu_r must be > 0");
    if (sc.detection.r == 1)
        return mu_r;
    return mu_r * snr_moment_ratio(sc);
}

} // namespace fsolink::moments
