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
#include "fsolink/moments.hpp"
#include "fsolink/quadrature.hpp"
#include "fsolink/specfun.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

// Ergodic capacity engines. Everything internal is in nats; bits = value/ln 2.
// The moment-based asymptote is E[ln(c gamma)], an asymptotically tight lower
// bound on E[ln(1 + c gamma)]: it must sit below the Monte-Carlo curve and
// close onto it as mu_r grows.

namespace fsolink::capacity {

enum class Method { high_snr, low_snr, gauss_hermite, meijer_expansion, monte_carlo };

inline const char *method_name(Method m) {
    switch (m) {
    case Method::high_snr: return "high_snr";
    case Method::low_snr: return "low_snr";
    case Method::gauss_hermite: return "gauss_hermite";
    case Method::meijer_expansion: return "meijer_expansion";
    case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

inline Method method_from_name(const std::string &name) {
    if (name == "high_snr") return Method::high_snr;
    if (name == "low_snr") return Method::low_snr;
    if (name == "gauss_hermite") return Method::gauss_hermite;
    if (name == "meijer_expansion") return Method::meijer_expansion;
    if (name == "monte_carlo") return Method::monte_carlo;
    throw config_error("unknown engine name: " + name);
}

/// Capacity value in nats per channel use; std_error present only for the
/// Monte-Carlo engine.
struct CapacityEstimate {
    double value = 0.0;
    Method method = Method::high_snr;
    std::optional<double> std_error;

    double bits() const { return value / 0.69314718055994530942; }
};

namespace detail {

/// The pointing part of the high-SNR bracket for the three Table-I columns.
inline double pointing_bracket(const channel::PointingErrorParams &p) {
    const double xi2 = p.xi * p.xi;
    double v = 1.0 / xi2 + std::log(xi2 / (xi2 + 1.0));
    if (p.s > 0.0)
        v += p.s * p.s / (2.0 * p.sigma_s * p.sigma_s * xi2 * (xi2 + 1.0));
    return v;
}

/// -ln(k^2/(k^2+1)) - E_1(k^2), the Rician term of the RLN bracket.
inline double rician_bracket(double k) {
    const double k2 = k * k;
    // E_1 underflows to 0 beyond k^2 ~ 700; the bracket tends to 0 like 1/k^2
    const double e1 = (k2 > 700.0) ? 0.0 : specfun::exp_integral_e1(k2);
    return std::log1p(1.0 / k2) - e1;
}

} // namespace detail

/// Moment-derivative high-SNR asymptote, E[ln(c gamma)] in closed form.
inline CapacityEstimate high_snr_asymptote(const channel::LinkScenario &sc) {
    sc.validate();
    const int r = sc.detection.r;
    const double ln_cmu = std::log(sc.detection.c * sc.mu_r);
    const double pe = detail::pointing_bracket(sc.pointing);

    struct Visitor {
        int r;
        double ln_cmu, pe;
        double operator()(const channel::Lognormal &t) const {
            return ln_cmu - r * (pe + 0.5 * t.sigma * t.sigma);
        }
        double operator()(const channel::RicianLognormal &t) const {
            return ln_cmu - r * (pe + 0.5 * t.sigma * t.sigma + detail::rician_bracket(t.k));
        }
        double operator()(const channel::Malaga &t) const {
            const channel::MalagaDerived d(t);
            // weights w_m = A Gamma(alpha) b_m Gamma(m) r / 2^r sum to 1
            std::vector<double> lw(t.beta);
            double mx = -1e300;
            for (int m = 1; m <= t.beta; ++m) {
                lw[m - 1] = d.ln_b[m - 1] + specfun::ln_gamma(static_cast<double>(m));
                mx = std::max(mx, lw[m - 1]);
            }
            double z = 0.0;
            for (double v : lw)
                z += std::exp(v - mx);
            double cap = 0.0;
            for (int m = 1; m <= t.beta; ++m) {
                const double w = std::exp(lw[m - 1] - mx) / z;
                cap += w * (ln_cmu + r * (-pe - std::log(d.big_b) + specfun::digamma(t.alpha) +
                                          specfun::digamma(static_cast<double>(m))));
            }
            return cap;
        }
        double operator()(const channel::GammaGamma &t) const {
            return ln_cmu - r * (pe + std::log(t.alpha * t.beta) - specfun::digamma(t.alpha) -
                                 specfun::digamma(t.beta));
        }
    };
    return {std::visit(Visitor{r, ln_cmu, pe}, sc.turbulence), Method::high_snr, std::nullopt};
}

/// Low-SNR asymptote c E[gamma]; equals mu_1 itself for heterodyne.
inline CapacityEstimate low_snr_asymptote(const channel::LinkScenario &sc) {
    sc.validate();
    const double v = sc.detection.c * std::exp(moments::ln_moment(sc, 1.0));
    return {v, Method::low_snr, std::nullopt};
}

/// Exact LN, zero-boresight capacity: Gauss-Hermite quadrature over the
/// lognormal factor of the pointing-averaged integrand
///   f(x) = ln(1+z) - z Phi(-z, 1, (xi^2+r)/r),  z = c mu ((xi^2+1)/xi^2)^r
///          e^{-r sigma^2/2} e^{r sqrt2 sigma x}.
/// The log-scale parameter lambda cancels.
inline CapacityEstimate ln_capacity_gauss_hermite(const channel::LinkScenario &sc,
                                                  int n_points = 20) {
    sc.validate();
    const auto *ln = std::get_if<channel::Lognormal>(&sc.turbulence);
    if (!ln)
        throw engine_error("gauss_hermite: requires LN turbulence");
    if (!sc.pointing.zero_boresight())
        throw engine_error("gauss_hermite: requires zero boresight (s = 0)");

    const int r = sc.detection.r;
    const double xi2 = sc.pointing.xi * sc.pointing.xi;
    const double a = (xi2 + r) / r;
    const double sigma = ln->sigma;
    const double z0 = sc.detection.c * sc.mu_r * std::pow((xi2 + 1.0) / xi2, r) *
                      std::exp(-0.5 * r * sigma * sigma);

    const quad::QuadratureRule rule = quad::gauss_hermite(n_points);
    double acc = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double z = z0 * std::exp(r * std::sqrt(2.0) * sigma * rule.nodes[i]);
        const double fx = std::log1p(z) - z * specfun::lerch_phi_s1(z, a);
        acc += rule.weights[i] * fx;
    }
    return {acc / specfun::sqrt_pi, Method::gauss_hermite, std::nullopt};
}

// ------------------------------------------------- Meijer-G expansion engine

namespace detail {

inline bool near_integer(double x, double tol = 1e-6) {
    return std::fabs(x - std::nearbyint(x)) < tol;
}

// Exponents closer than this to an integer collision are routed through the
// confluent (merged double-pole) forms; a lone Gamma(-kappa)^2 term next to
// an uncancelled 1/eps partner would otherwise blow up as kappa -> integer.
inline constexpr double kDegenerateTol = 0.05;

/// Small-argument expansion of G^{3r+2,1}_{r+2,3r+2}(z | 0,1,k1 ; k2,0,0):
/// the 0,0 pair yields the logarithmic leading part; each exponent in k2
/// yields one power term (z^kappa), with the exact double-pole form when
/// kappa sits on (or near) a positive integer. Exponents coinciding within
/// 1e-6 are a Gamma pole; reported with a perturbation hint.
inline double meijer_small_z_sum(const std::vector<double> &k1, const std::vector<double> &k2,
                                 double ln_z) {
    using specfun::signed_ln_gamma;
    for (std::size_t i = 0; i < k2.size(); ++i)
        for (std::size_t l = i + 1; l < k2.size(); ++l)
            if (std::fabs(k2[i] - k2[l]) < 1e-6)
                throw numeric_error(
                    "meijer_expansion: exponents coincide (Gamma pole); "
                    "perturb alpha by ~1e-4 and retry");

    // log part: G0 [ -ln z + sum psi(k2) - sum psi(k1) ]
    double ln_g0 = 0.0;
    double psi_sum = -ln_z;
    for (double b : k2) {
        ln_g0 += specfun::ln_gamma(b);
        psi_sum += specfun::digamma(b);
    }
    for (double a : k1) {
        ln_g0 -= specfun::ln_gamma(a);
        psi_sum -= specfun::digamma(a);
    }
    double total = std::exp(ln_g0) * psi_sum;

    for (std::size_t i = 0; i < k2.size(); ++i) {
        const double bk = k2[i];
        if (near_integer(bk, kDegenerateTol) && bk > 0.5) {
            // collision with the 0,0 pair: term (-1)^j z^j R(j)/j *
            // [ln z + gamma_E - 1/j - sum_{l != i} psi(k2l-j) + sum psi(k1l-j)]
            const int j = static_cast<int>(std::nearbyint(bk));
            bool drop = false;
            for (std::size_t l = 0; l < k2.size() && !drop; ++l)
                if (l != i && near_integer(k2[l] - j, kDegenerateTol) && k2[l] - j < 0.5)
                    drop = true; // higher-order degeneracy, O(z^j ln^2 z)
            for (std::size_t l = 0; l < k1.size() && !drop; ++l)
                if (near_integer(k1[l] - j, kDegenerateTol) && k1[l] - j < 0.5)
                    drop = true; // R(j) = 0
            if (drop)
                continue;
            double ln_r = 0.0;
            int sign = (j % 2 == 0) ? 1 : -1;
            double bracket = ln_z + specfun::euler_gamma - 1.0 / j;
            for (std::size_t l = 0; l < k2.size(); ++l) {
                if (l == i)
                    continue;
                const auto sg = signed_ln_gamma(k2[l] - j);
                ln_r += sg.ln;
                sign *= sg.sign;
                bracket -= specfun::digamma_any(k2[l] - j);
            }
            for (double a : k1) {
                const auto sg = signed_ln_gamma(a - j);
                ln_r -= sg.ln;
                sign *= sg.sign;
                bracket += specfun::digamma_any(a - j);
            }
            total += sign * std::exp(j * ln_z + ln_r - std::log(static_cast<double>(j))) * bracket;
            continue;
        }
        // regular term: z^bk G(-bk)^2 G(1+bk)/G(1-bk) prod_{l!=i} G(k2l-bk) / prod G(k1l-bk)
        bool vanish = false, drop = false;
        for (double a : k1)
            if (near_integer(a - bk) && a - bk < 0.5)
                vanish = true; // reciprocal Gamma zero
        if (near_integer(1.0 - bk) && 1.0 - bk < 0.5)
            vanish = true;
        for (std::size_t l = 0; l < k2.size(); ++l)
            if (l != i && near_integer(k2[l] - bk, kDegenerateTol) && k2[l] - bk < 0.5)
                drop = true; // degenerate pair, subleading O(z^bk ln z)
        if (vanish || drop)
            continue;

        double ln_t = bk * ln_z;
        int sign = 1;
        auto mul = [&](double x) {
            const auto sg = signed_ln_gamma(x);
            ln_t += sg.ln;
            sign *= sg.sign;
        };
        auto divi = [&](double x) {
            const auto sg = signed_ln_gamma(x);
            ln_t -= sg.ln;
            sign *= sg.sign;
        };
        mul(-bk);
        mul(-bk);
        mul(1.0 + bk);
        divi(1.0 - bk);
        for (std::size_t l = 0; l < k2.size(); ++l)
            if (l != i)
                mul(k2[l] - bk);
        for (double a : k1)
            divi(a - bk);
        total += sign * std::exp(ln_t);
    }
    return total;
}

} // namespace detail

/// High-SNR asymptote of the exact Meijer-G capacity for Malaga/GG with zero
/// boresight: the logarithmic leading part plus the finite power-term sum.
/// Converges onto high_snr_asymptote as mu_r -> inf and tracks the exact
/// capacity considerably further down in SNR.
inline CapacityEstimate malaga_meijer_expansion_asymptote(const channel::LinkScenario &sc) {
    sc.validate();
    if (!sc.pointing.zero_boresight())
        throw engine_error("meijer_expansion: requires zero boresight (s = 0)");

    const int r = sc.detection.r;
    const double c = sc.detection.c;
    const double xi2 = sc.pointing.xi * sc.pointing.xi;

    std::vector<double> k1(r);
    for (int l = 1; l <= r; ++l)
        k1[l - 1] = (xi2 + l) / r;

    const auto xi_family = [&](std::vector<double> &k2) {
        for (int l = 0; l < r; ++l)
            k2.push_back((xi2 + l) / r);
    };

    if (const auto *gg = std::get_if<channel::GammaGamma>(&sc.turbulence)) {
        const double a = gg->alpha, b = gg->beta;
        const double ln_j = (a + b - 2.0) * std::log(static_cast<double>(r)) + std::log(xi2) -
                            (r - 1.0) * std::log(2.0 * specfun::pi) - specfun::ln_gamma(a) -
                            specfun::ln_gamma(b);
        const double ln_e =
            r * (std::log(xi2 * a * b) - std::log(xi2 + 1.0)) - 2.0 * r * std::log(static_cast<double>(r));
        const double ln_z = ln_e - std::log(c * sc.mu_r);
        std::vector<double> k2;
        xi_family(k2);
        for (int l = 0; l < r; ++l)
            k2.push_back((a + l) / r);
        for (int l = 0; l < r; ++l)
            k2.push_back((b + l) / r);
        const double v = std::exp(ln_j) * detail::meijer_small_z_sum(k1, k2, ln_z);
        return CapacityEstimate{v, Method::meijer_expansion, std::nullopt};
    }

    const auto *ml = std::get_if<channel::Malaga>(&sc.turbulence);
    if (!ml)
        throw engine_error("meijer_expansion: requires Malaga or GG turbulence");

    const channel::MalagaDerived d(*ml);
    const double ln_d = std::log(xi2) + d.ln_big_a - r * std::log(2.0) -
                        (r - 1.0) * std::log(2.0 * specfun::pi);
    const double ln_e = r * (std::log(d.big_b * xi2) - std::log(xi2 + 1.0)) -
                        2.0 * r * std::log(static_cast<double>(r));
    const double ln_z = ln_e - std::log(c * sc.mu_r);
    double v = 0.0;
    for (int m = 1; m <= ml->beta; ++m) {
        const double ln_cm = d.ln_b[m - 1] + (ml->alpha + m - 1.0) * std::log(static_cast<double>(r));
        std::vector<double> k2;
        xi_family(k2);
        for (int l = 0; l < r; ++l)
            k2.push_back((ml->alpha + l) / r);
        for (int l = 0; l < r; ++l)
            k2.push_back((m + l) / static_cast<double>(r));
        v += std::exp(ln_d + ln_cm) * detail::meijer_small_z_sum(k1, k2, ln_z);
    }
    return {v, Method::meijer_expansion, std::nullopt};
}

// ------------------------------------------------------ Table-I special cases

enum class SpecialCaseRow {
    lognormal,
    rician_lognormal,
    rician,
    rayleigh_lognormal,
    rayleigh,
    malaga,
    gamma_gamma
};

enum class PointingCase { nonzero_boresight, zero_boresight, no_pointing };

/// Direct evaluation of one Table-I high-SNR cell. Independent code path from
/// high_snr_asymptote (shared only through specfun).
inline CapacityEstimate special_case_asymptote(SpecialCaseRow row, PointingCase pe,
                                               const channel::LinkScenario &sc) {
    sc.validate();
    const int r = sc.detection.r;
    const double ln_cmu = std::log(sc.detection.c * sc.mu_r);

    double pe_term = 0.0;
    if (pe != PointingCase::no_pointing) {
        const double xi2 = sc.pointing.xi * sc.pointing.xi;
        pe_term = 1.0 / xi2 + std::log(xi2 / (xi2 + 1.0));
        if (pe == PointingCase::nonzero_boresight)
            pe_term += sc.pointing.s * sc.pointing.s /
                       (2.0 * sc.pointing.sigma_s * sc.pointing.sigma_s * xi2 * (xi2 + 1.0));
    }

    const auto *rln = std::get_if<channel::RicianLognormal>(&sc.turbulence);
    const auto need_rln = [&]() -> const channel::RicianLognormal & {
        if (!rln)
            throw engine_error("special_case: row requires RLN parameters");
        return *rln;
    };

    switch (row) {
    case SpecialCaseRow::lognormal: {
        const auto *ln = std::get_if<channel::Lognormal>(&sc.turbulence);
        if (!ln)
            throw engine_error("special_case: row requires LN parameters");
        return {ln_cmu - r * (pe_term + 0.5 * ln->sigma * ln->sigma), Method::high_snr,
                std::nullopt};
    }
    case SpecialCaseRow::rician_lognormal: {
        const auto &t = need_rln();
        return {ln_cmu - r * (pe_term + 0.5 * t.sigma * t.sigma + detail::rician_bracket(t.k)),
                Method::high_snr, std::nullopt};
    }
    case SpecialCaseRow::rician: {
        const auto &t = need_rln();
        return {ln_cmu - r * (pe_term + detail::rician_bracket(t.k)), Method::high_snr,
                std::nullopt};
    }
    case SpecialCaseRow::rayleigh_lognormal: {
        const auto &t = need_rln();
        return {ln_cmu - r * (pe_term + 0.5 * t.sigma * t.sigma + specfun::euler_gamma),
                Method::high_snr, std::nullopt};
    }
    case SpecialCaseRow::rayleigh:
        return {ln_cmu - r * (pe_term + specfun::euler_gamma), Method::high_snr, std::nullopt};
    case SpecialCaseRow::malaga: {
        const auto *ml = std::get_if<channel::Malaga>(&sc.turbulence);
        if (!ml)
            throw engine_error("special_case: row requires Malaga parameters");
        const channel::MalagaDerived d(*ml);
        std::vector<double> lw(ml->beta);
        double mx = -1e300;
        for (int m = 1; m <= ml->beta; ++m) {
            lw[m - 1] = d.ln_b[m - 1] + specfun::ln_gamma(static_cast<double>(m));
            mx = std::max(mx, lw[m - 1]);
        }
        double z = 0.0;
        for (double v : lw)
            z += std::exp(v - mx);
        double cap = 0.0;
        for (int m = 1; m <= ml->beta; ++m) {
            const double w = std::exp(lw[m - 1] - mx) / z;
            cap += w * (ln_cmu + r * (-pe_term - std::log(d.big_b) + specfun::digamma(ml->alpha) +
                                      specfun::digamma(static_cast<double>(m))));
        }
        return {cap, Method::high_snr, std::nullopt};
    }
    case SpecialCaseRow::gamma_gamma: {
        const auto *gg = std::get_if<channel::GammaGamma>(&sc.turbulence);
        if (!gg)
            throw engine_error("special_case: row requires GG parameters");
        return {ln_cmu - r * (pe_term + std::log(gg->alpha * gg->beta) -
                              specfun::digamma(gg->alpha) - specfun::digamma(gg->beta)),
                Method::high_snr, std::nullopt};
    }
    }
    throw engine_error("special_case: unknown row");
}

} // namespace fsolink::capacity
