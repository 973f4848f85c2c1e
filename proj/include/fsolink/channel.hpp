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

#include "fsolink/errors.hpp"
#include "fsolink/quadrature.hpp"
#include "fsolink/rng.hpp"
#include "fsolink/specfun.hpp"

#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace fsolink::channel {

// ---------------------------------------------------------------- pointing

/// Misalignment geometry. xi is the ratio of equivalent beam radius to jitter
/// sigma_s, s the fixed boresight displacement, a0 the maximum collected
/// power fraction. Path loss and a0 are absorbed into mu_r downstream, so
/// a0 = 1 is the working default.
struct PointingErrorParams {
    double xi = 1.0;
    double sigma_s = 1.0;
    double s = 0.0;
    double a0 = 1.0;

    void validate() const {
        if (!(xi > 0.0))
            throw config_error("pointing: xi must be > 0");
        if (!(sigma_s > 0.0))
            throw config_error("pointing: sigma_s must be > 0");
        if (!(s >= 0.0))
            throw config_error("pointing: s must be >= 0");
        if (!(a0 > 0.0 && a0 <= 1.0))
            throw config_error("pointing: a0 must be in (0, 1]");
    }

    bool zero_boresight() const { return s == 0.0; }
};

// -------------------------------------------------------------- turbulence

/// Weak-turbulence lognormal irradiance. lambda defaults to -sigma^2/2 so the
/// mean irradiance is 1; lambda cancels out of every normalized statistic.
struct Lognormal {
    double sigma = 0.35;
    double lambda = -0.5 * 0.35 * 0.35;

    static Lognormal unit_mean(double sigma_) { return {sigma_, -0.5 * sigma_ * sigma_}; }

    void validate() const {
        if (!(sigma > 0.0))
            throw config_error("LN: sigma must be > 0");
        if (!(sigma * sigma < 1.0))
            throw config_error("LN: scintillation index sigma^2 must be < 1");
    }
};

/// Product of Rician small-scale power (parameter k, mean omega) and a
/// lognormal large-scale factor.
struct RicianLognormal {
    double k = 5.0;
    double omega = 1.0;
    double sigma = 0.35;
    double lambda = -0.5 * 0.35 * 0.35;

    static RicianLognormal unit_mean(double k_, double sigma_) {
        return {k_, 1.0, sigma_, -0.5 * sigma_ * sigma_};
    }

    void validate() const {
        if (!(k > 0.0))
            throw config_error("RLN: k must be > 0");
        if (!(omega > 0.0))
            throw config_error("RLN: omega must be > 0");
        if (!(sigma > 0.0) || !(sigma * sigma < 1.0))
            throw config_error("RLN: sigma must satisfy 0 < sigma^2 < 1");
    }
};

/// Malaga generalized turbulence (natural beta).
struct Malaga {
    double alpha = 2.296;
    int beta = 2;
    double b0 = 0.1079;
    double rho = 0.596;
    double omega_los = 1.3265;   // Omega, LOS power
    double delta_phi = 1.5707963267948966; // phi_A - phi_B

    void validate() const {
        if (!(alpha > 0.0))
            throw config_error("Malaga: alpha must be > 0");
        if (beta < 1)
            throw config_error("Malaga: beta must be a natural number");
        if (!(b0 > 0.0))
            throw config_error("Malaga: b0 must be > 0");
        if (!(rho >= 0.0 && rho <= 1.0))
            throw config_error("Malaga: rho must be in [0, 1]");
        if (!(omega_los >= 0.0))
            throw config_error("Malaga: Omega must be >= 0");
    }

    double g() const { return 2.0 * b0 * (1.0 - rho); }
    double omega_prime() const {
        return omega_los + 2.0 * b0 * rho +
               2.0 * std::sqrt(2.0 * b0 * rho * omega_los) * std::cos(delta_phi);
    }
};

/// Gamma-Gamma turbulence; the Malaga limit rho -> 1, Omega' = 1.
struct GammaGamma {
    double alpha = 2.296;
    double beta = 2.0;

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw config_error("GG: alpha and beta must be > 0");
    }
};

using TurbulenceModel = std::variant<Lognormal, RicianLognormal, Malaga, GammaGamma>;

inline void validate(const TurbulenceModel &m) {
    std::visit([](const auto &t) { t.validate(); }, m);
}

/// Precomputed log-space Malaga constants. Everything here is positive, so a
/// plain log representation suffices (needed: the Gamma-Gamma limit g -> 0
/// drives A and a_m across ~12 decades in opposite directions).
struct MalagaDerived {
    double g = 0.0;
    double omega_prime = 0.0;
    double big_b = 0.0;              // B = alpha beta (g + Omega') / (g beta + Omega')
    double ln_bessel_scale = 0.0;    // ln(alpha beta / (g beta + Omega')), argument scale in the PDF
    double ln_big_a = 0.0;           // ln A
    std::vector<double> ln_a;        // ln a_m, m = 1..beta
    std::vector<double> ln_b;        // ln b_m = ln a_m - (alpha+m)/2 * ln_bessel_scale

    explicit MalagaDerived(const Malaga &m) {
        m.validate();
        const double alpha = m.alpha;
        const double beta = m.beta;
        g = m.g();
        if (!(g > 0.0))
            throw config_error("Malaga: rho = 1 gives g = 0; use the GammaGamma model");
        omega_prime = m.omega_prime();
        const double gbo = g * beta + omega_prime;
        big_b = alpha * beta * (g + omega_prime) / gbo;
        ln_bessel_scale = std::log(alpha * beta / gbo);

        using specfun::ln_gamma;
        ln_big_a = std::log(2.0) + 0.5 * alpha * std::log(alpha) -
                   (1.0 + 0.5 * alpha) * std::log(g) - ln_gamma(alpha) +
                   (beta + 0.5 * alpha) * std::log(g * beta / gbo);
        ln_a.resize(m.beta);
        ln_b.resize(m.beta);
        for (int mm = 1; mm <= m.beta; ++mm) {
            const double ln_binom =
                ln_gamma(beta) - ln_gamma(mm) - ln_gamma(beta - mm + 1.0);
            ln_a[mm - 1] = ln_binom + (1.0 - 0.5 * mm) * std::log(gbo) - ln_gamma(mm) +
                           (mm - 1.0) * std::log(omega_prime / g) +
                           0.5 * mm * std::log(alpha / beta);
            ln_b[mm - 1] = ln_a[mm - 1] - 0.5 * (alpha + mm) * ln_bessel_scale;
        }
    }
};

// --------------------------------------------------------------- detection

/// r = 1: heterodyne (c = 1, capacity exact). r = 2: IM/DD (c = e/2pi,
/// capacity lower bound). c is uniquely determined by r.
struct Detection {
    int r = 1;
    double c = 1.0;

    static Detection heterodyne() { return {1, 1.0}; }
    static Detection im_dd() { return {2, 0.43262022464132097}; } // e/(2 pi)
    static Detection from_r(int r_) {
        if (r_ == 1)
            return heterodyne();
        if (r_ == 2)
            return im_dd();
        throw config_error("detection: r must be 1 (heterodyne) or 2 (IM/DD)");
    }

    void validate() const {
        const Detection ref = from_r(r);
        if (c != ref.c)
            throw config_error("detection: c is not the value implied by r");
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// One end-to-end link: turbulence x pointing x detection at electrical SNR
/// mu_r (mu_1 = average SNR for heterodyne; mu_2 = electrical SNR for IM/DD).
struct LinkScenario {
    TurbulenceModel turbulence;
    PointingErrorParams pointing;
    Detection detection;
    double mu_r = 1.0;

    void validate() const {
        channel::validate(turbulence);
        pointing.validate();
        detection.validate();
        if (!(mu_r > 0.0))
            throw config_error("scenario: mu_r must be > 0");
    }

    LinkScenario with_mu(double mu) const {
        LinkScenario sc = *this;
        sc.mu_r = mu;
        return sc;
    }
};

// ------------------------------------------------------------- first moments

/// E[I_p] in closed form (boresight-aware).
inline double mean_pointing(const PointingErrorParams &p) {
    const double xi2 = p.xi * p.xi;
    return p.a0 * xi2 / (xi2 + 1.0) *
           std::exp(-p.s * p.s / (2.0 * p.sigma_s * p.sigma_s * (xi2 + 1.0)));
}

/// E[I_a] in closed form for each turbulence model.
inline double mean_turbulence(const TurbulenceModel &m) {
    struct Visitor {
        double operator()(const Lognormal &t) const {
            return std::exp(t.lambda + 0.5 * t.sigma * t.sigma);
        }
        double operator()(const RicianLognormal &t) const {
            return t.omega * std::exp(t.lambda + 0.5 * t.sigma * t.sigma);
        }
        double operator()(const Malaga &t) const { return t.g() + t.omega_prime(); }
        double operator()(const GammaGamma &) const { return 1.0; }
    };
    return std::visit(Visitor{}, m);
}

// ------------------------------------------------------------------- PDFs

/// Pointing-error density f_p(ip) on (0, a0].
inline double pointing_pdf(const PointingErrorParams &p, double ip) {
    p.validate();
    if (!(ip > 0.0 && ip <= p.a0))
        throw std::domain_error("pointing_pdf: ip must lie in (0, a0]");
    const double xi2 = p.xi * p.xi;
    double ln_f = std::log(xi2) - xi2 * std::log(p.a0) + (xi2 - 1.0) * std::log(ip);
    if (p.s > 0.0) {
        const double arg = p.s / p.sigma_s * std::sqrt(-2.0 * xi2 * std::log(ip / p.a0));
        ln_f += -p.s * p.s / (2.0 * p.sigma_s * p.sigma_s) + specfun::ln_bessel_i0(arg);
    }
    return std::exp(ln_f);
}

namespace detail {

inline double lognormal_pdf(double x, double sigma, double lambda) {
    if (x <= 0.0)
        return 0.0;
    const double z = (std::log(x) - lambda) / sigma;
    return std::exp(-0.5 * z * z) / (x * sigma * std::sqrt(2.0 * specfun::pi));
}

/// Rician power density with parameter k and mean omega.
inline double rician_power_pdf(double x, double k, double omega) {
    if (x <= 0.0)
        return 0.0;
    const double k2 = k * k;
    const double scale = (k2 + 1.0) / omega;
    const double arg = 2.0 * k * std::sqrt(scale * x);
    const double ln_f = std::log(scale) - k2 - scale * x + specfun::ln_bessel_i0(arg);
    return std::exp(ln_f);
}

inline double malaga_pdf(const MalagaDerived &d, double alpha, int beta, double x) {
    if (x <= 0.0)
        return 0.0;
    const double ln_x = std::log(x);
    const double bessel_arg = 2.0 * std::exp(0.5 * (d.ln_bessel_scale + ln_x));
    double acc = 0.0;
    for (int m = 1; m <= beta; ++m) {
        const double nu = alpha - m;
        const double ln_term = d.ln_big_a + d.ln_a[m - 1] +
                               (0.5 * (alpha + m) - 1.0) * ln_x +
                               specfun::ln_bessel_k(nu, bessel_arg);
        acc += std::exp(ln_term);
    }
    return acc;
}

inline double gamma_gamma_pdf(const GammaGamma &t, double x) {
    if (x <= 0.0)
        return 0.0;
    const double a = t.alpha, b = t.beta;
    const double bessel_arg = 2.0 * std::sqrt(a * b * x);
    const double ln_f = std::log(2.0) + 0.5 * (a + b) * std::log(a * b) -
                        specfun::ln_gamma(a) - specfun::ln_gamma(b) +
                        (0.5 * (a + b) - 1.0) * std::log(x) +
                        specfun::ln_bessel_k(a - b, bessel_arg);
    return std::exp(ln_f);
}

} // namespace detail

/// Marginal atmospheric density f_a(ia). The RLN case is the 1-D numerical
/// mixture of the Rician power over the lognormal factor.
inline double turbulence_pdf(const TurbulenceModel &m, double ia) {
    if (!(ia > 0.0))
        throw std::domain_error("turbulence_pdf: ia must be > 0");
    struct Visitor {
        double ia;
        double operator()(const Lognormal &t) const {
            return detail::lognormal_pdf(ia, t.sigma, t.lambda);
        }
        double operator()(const RicianLognormal &t) const {
            // I = I_R * I_L; condition on u = ln I_L:
            // f(i) = int f_R(i e^{-u}) e^{-u} N(u; lambda, sigma^2) du
            const double lo = t.lambda - 10.0 * t.sigma;
            const double hi = t.lambda + 10.0 * t.sigma;
            const double i = ia;
            const auto integrand = [&](double u) {
                const double z = (u - t.lambda) / t.sigma;
                const double gauss = std::exp(-0.5 * z * z) /
                                     (t.sigma * std::sqrt(2.0 * specfun::pi));
                return detail::rician_power_pdf(i * std::exp(-u), t.k, t.omega) *
                       std::exp(-u) * gauss;
            };
            return quad::integrate(integrand, lo, hi, 1e-9, 1e-300);
        }
        double operator()(const Malaga &t) const {
            const MalagaDerived d(t);
            return detail::malaga_pdf(d, t.alpha, t.beta, ia);
        }
        double operator()(const GammaGamma &t) const { return detail::gamma_gamma_pdf(t, ia); }
    };
    return std::visit(Visitor{ia}, m);
}

/// Composite irradiance density for I = I_a * I_p (path loss normalized to 1).
/// LN with zero boresight uses the exact closed-form erfc expression; every
/// other combination integrates the conditioning integral adaptively
/// (tolerance 1e-7; throws numeric_error if the quadrature fails).
inline double composite_pdf(const TurbulenceModel &m, const PointingErrorParams &p, double i) {
    if (!(i > 0.0))
        throw std::domain_error("composite_pdf: i must be > 0");
    p.validate();

    if (const auto *ln = std::get_if<Lognormal>(&m); ln && p.zero_boresight()) {
        const double xi2 = p.xi * p.xi;
        const double sig2 = ln->sigma * ln->sigma;
        const double ln_pref = std::log(0.5 * xi2) - xi2 * std::log(p.a0) +
                               (xi2 - 1.0) * std::log(i) +
                               xi2 * (0.5 * xi2 * sig2 - ln->lambda);
        const double num = xi2 * sig2 - ln->lambda + std::log(i / p.a0);
        const double denom = std::sqrt(2.0) * ln->sigma;
        return std::exp(ln_pref + specfun::ln_erfc(num / denom));
    }

    // conditioning integral: f(i) = int_{i/a0}^inf f_a(z) f_p(i/z) / z dz
    const auto integrand = [&](double z) {
        const double ip = i / z;
        if (!(ip > 0.0) || ip > p.a0)
            return 0.0;
        return turbulence_pdf(m, z) * pointing_pdf(p, ip) / z;
    };
    return quad::integrate_semi_infinite(integrand, i / p.a0, 1e-7, 1e-300);
}

// ---------------------------------------------------------------- samplers

/// Radial draw: R^2 is noncentral chi-square (2 dof, noncentrality s^2,
/// per-axis variance sigma_s^2); I_p = a0 exp(-R^2 / (2 sigma_s^2 xi^2)).
/// Reproduces the closed-form pointing moments exactly.
inline double sample_pointing(const PointingErrorParams &p, rng::Stream &stream) {
    const double x = p.s + p.sigma_s * stream.next_normal();
    const double y = p.sigma_s * stream.next_normal();
    const double r2 = x * x + y * y;
    return p.a0 * std::exp(-r2 / (2.0 * p.sigma_s * p.sigma_s * p.xi * p.xi));
}

inline double sample_turbulence(const TurbulenceModel &m, rng::Stream &stream) {
    struct Visitor {
        rng::Stream &stream;
        double operator()(const Lognormal &t) const {
            return std::exp(t.lambda + t.sigma * stream.next_normal());
        }
        double operator()(const RicianLognormal &t) const {
            const double ln_part = std::exp(t.lambda + t.sigma * stream.next_normal());
            const double re = t.k + std::sqrt(0.5) * stream.next_normal();
            const double im = std::sqrt(0.5) * stream.next_normal();
            const double power = t.omega * (re * re + im * im) / (t.k * t.k + 1.0);
            return ln_part * power;
        }
        double operator()(const Malaga &t) const {
            const double x = stream.next_gamma(t.alpha) / t.alpha;
            const double los = stream.next_gamma(static_cast<double>(t.beta)) *
                               (t.omega_prime() / t.beta);
            const double sc = std::sqrt(0.5 * t.g());
            const double re = std::sqrt(los) + sc * stream.next_normal();
            const double im = sc * stream.next_normal();
            return x * (re * re + im * im);
        }
        double operator()(const GammaGamma &t) const {
            return stream.next_gamma(t.alpha) / t.alpha * stream.next_gamma(t.beta) / t.beta;
        }
    };
    return std::visit(Visitor{stream}, m);
}

/// One SNR draw: gamma = mu_r (I_a I_p / (E[I_a] E[I_p]))^r, so E[gamma]
/// matches the closed-form first moment by construction.
inline double snr_sample(const LinkScenario &sc, rng::Stream &stream) {
    if (!(sc.mu_r > 0.0))
        throw config_error("snr_sample: mu_r must be > 0");
    const double ia = sample_turbulence(sc.turbulence, stream);
    const double ip = sample_pointing(sc.pointing, stream);
    const double norm = ia * ip / (mean_turbulence(sc.turbulence) * mean_pointing(sc.pointing));
    return sc.mu_r * std::pow(norm, static_cast<double>(sc.detection.r));
}

} // namespace fsolink::channel
