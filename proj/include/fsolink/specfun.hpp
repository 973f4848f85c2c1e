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

#include <cmath>
#include <limits>

// Real-valued special functions. Every argument produced by the channel and
// capacity formulas is real and sign-definite, so no complex branches exist
// here. Gamma-heavy expressions elsewhere are assembled from ln_gamma and
// exponentiated once.

namespace fsolink::specfun {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double sqrt_pi = 1.77245385090551602729816748334114518;
inline constexpr double euler_gamma = 0.5772156649015329;

/// ln Gamma(x) for x > 0 (Lanczos, g = 7).
inline double ln_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma: requires x > 0");
    if (x < 0.5)
        return ln_gamma(x + 1.0) - std::log(x);

    static constexpr double coef[9] = {
        0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

    const double z = x - 1.0;
    double acc = coef[0];
    for (int i = 1; i < 9; ++i)
        acc += coef[i] / (z + i);
    const double t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

/// sin(pi x) with argument reduction (exact zeros at integers).
inline double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0)
        r += 2.0;
    if (r == std::floor(r))
        return 0.0;
    return std::sin(pi * r);
}

/// ln |Gamma(x)| with the sign of Gamma(x), any non-pole real x.
struct SignedLnGamma {
    double ln;
    int sign;
};

inline SignedLnGamma signed_ln_gamma(double x) {
    if (x > 0.0)
        return {ln_gamma(x), 1};
    const double s = sin_pi(x);
    if (s == 0.0)
        throw numeric_error("signed_ln_gamma: Gamma pole at nonpositive integer");
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return {std::log(pi / std::fabs(s)) - ln_gamma(1.0 - x), s > 0.0 ? 1 : -1};
}

/// psi(x) for x > 0: recurrence up to x >= 12, then the Bernoulli asymptotic series.
inline double digamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("digamma: requires x > 0");
    double acc = 0.0;
    while (x < 12.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    // B_{2n}/(2n) coefficients
    double series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                    inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    return acc + std::log(x) - 0.5 * inv - series;
}

/// psi at any non-pole real argument (reflection for x <= 0).
inline double digamma_any(double x) {
    if (x > 0.0)
        return digamma(x);
    const double r = x - std::nearbyint(x); // in (-1/2, 1/2], zero only at poles
    if (r == 0.0)
        throw numeric_error("digamma_any: pole at nonpositive integer");
    // psi(x) = psi(1-x) - pi cot(pi x)
    return digamma(1.0 - x) - pi / std::tan(pi * r);
}

/// Complementary error function: positive-term erf series below 1.5,
/// Lentz continued fraction above.
inline double erfc(double x) {
    if (x < 0.0)
        return 2.0 - erfc(-x);
    if (x < 1.5) {
        // erf(x) = 2x e^{-x^2}/sqrt(pi) * sum_n (2x^2)^n / (2n+1)!!
        const double z = 2.0 * x * x;
        double term = 1.0, sum = 1.0;
        for (int n = 1; n < 200; ++n) {
            term *= z / (2.0 * n + 1.0);
            sum += term;
            if (term < sum * 1e-17)
                break;
        }
        return 1.0 - 2.0 * x * std::exp(-x * x) / sqrt_pi * sum;
    }
    // sqrt(pi) e^{x^2} erfc(x) = 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+ ...))))
    const double tiny = 1e-300;
    double f = x, c = f, d = 0.0;
    for (int n = 1; n < 400; ++n) {
        const double a = 0.5 * n;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x * x) / (sqrt_pi * f);
}

/// ln erfc(x), finite for all x (asymptotic branch past the underflow point).
inline double ln_erfc(double x) {
    if (x <= 25.0)
        return std::log(erfc(x));
    const double x2 = x * x;
    const double series = 1.0 - 0.5 / x2 + 0.75 / (x2 * x2) - 1.875 / (x2 * x2 * x2);
    return -x2 - std::log(x * sqrt_pi) + std::log(series);
}

/// E_1(x) = int_1^inf e^{-x t}/t dt for x > 0: series below 1, continued fraction above.
inline double exp_integral_e1(double x) {
    if (!(x > 0.0))
        throw std::domain_error("exp_integral_e1: requires x > 0");
    if (x <= 1.0) {
        double term = 1.0, sum = 0.0;
        for (int k = 1; k < 60; ++k) {
            term *= -x / k;
            const double contrib = -term / k;
            sum += contrib;
            if (std::fabs(contrib) < 1e-18 * std::fabs(sum) + 1e-300)
                break;
        }
        return sum - euler_gamma - std::log(x);
    }
    // E_1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...))))  (modified Lentz)
    const double tiny = 1e-300;
    double b = x + 1.0;
    double f = b, c = f, d = 0.0;
    for (int k = 1; k < 400; ++k) {
        const double a = -static_cast<double>(k) * k;
        b += 2.0;
        d = b + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x) / f;
}

/// Confluent hypergeometric 1F1(a; 1; z) for a in [-10, 1], z in [-200, 0].
/// Kummer transform to 1F1(1-a; 1; -z) makes the series positive-term.
inline double kummer_1f1(double a, double b, double z) {
    if (b != 1.0)
        throw std::domain_error("kummer_1f1: only b = 1 is supported");
    if (!(a >= -10.0 && a <= 1.0) || !(z >= -200.0 && z <= 0.0))
        throw std::domain_error("kummer_1f1: argument outside supported range");
    if (a == 0.0)
        return 1.0; // empty series
    const double w = -z;       // >= 0
    const double ap = 1.0 - a; // >= 0
    double term = 1.0, sum = 1.0;
    const double peak = std::sqrt(ap * w);
    for (int m = 0; m < 100000; ++m) {
        term *= (ap + m) * w / ((m + 1.0) * (m + 1.0));
        sum += term;
        if (term < sum * 1e-17 && m > peak)
            break;
    }
    return std::exp(z) * sum;
}

/// 2F2(1,1;2,2;-x) for x >= 0.
/// Series with compensated summation below x = 8; above, the integral route
/// x*2F2 = int_0^1 (1 - e^{-x v})/v dv, which is independent of the E_1 path.
inline double hyp2f2_1122(double x) {
    if (x < 0.0)
        throw std::domain_error("hyp2f2_1122: requires x >= 0");
    if (x == 0.0)
        return 1.0;
    if (x <= 8.0) {
        // sum_m (-x)^m / ((m+1)^2 m!)   (Kahan-compensated)
        double sum = 0.0, comp = 0.0, term = 1.0;
        for (int m = 0; m < 400; ++m) {
            const double val = term / ((m + 1.0) * (m + 1.0));
            const double y = val - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            term *= -x / (m + 1.0);
            if (std::fabs(term) < 1e-18 * std::fabs(sum) && m > x)
                break;
        }
        return sum;
    }
    const quad::Rule &gl = quad::gauss_legendre_m11_32();
    double total = 0.0;
    double lo = 0.0;
    for (double hi = std::min(1.0 / x, 1.0); lo < 1.0; hi = std::min(4.0 * hi, 1.0)) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double panel = 0.0;
        for (int k = 0; k < 32; ++k) {
            const double v = mid + half * gl.nodes[k];
            panel += gl.weights[k] * (-std::expm1(-x * v)) / v;
        }
        total += panel * half;
        lo = hi;
    }
    return total / x;
}

/// I_0(x) e^{-x} for x >= 0 (series below 15, asymptotic above). Never overflows.
inline double bessel_i0_scaled(double x) {
    if (x < 0.0)
        x = -x;
    if (x < 15.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int m = 1; m < 200; ++m) {
            term *= q / (static_cast<double>(m) * m);
            sum += term;
            if (term < sum * 1e-17)
                break;
        }
        return sum * std::exp(-x);
    }
    // I_0(x) ~ e^x/sqrt(2 pi x) * sum_k prod_{j<=k}(2j-1)^2 / (k! (8x)^k)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double tk = 2.0 * k - 1.0;
        const double next = term * tk * tk / (8.0 * k * x);
        if (next >= term)
            break; // asymptotic series started diverging
        term = next;
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}

/// I_0(x); overflows to +inf near x ~ 709, use bessel_i0_scaled / ln_bessel_i0 there.
inline double bessel_i0(double x) { return bessel_i0_scaled(x) * std::exp(std::fabs(x)); }

/// ln I_0(x), stable for all x >= 0.
inline double ln_bessel_i0(double x) {
    if (x < 0.0)
        x = -x;
    return x + std::log(bessel_i0_scaled(x));
}

/// ln K_nu(x) for x > 0, any real order (K is even in nu).
/// Peak-scaled panel quadrature of K_nu(x) = e^{-x} int_0^inf
/// e^{-x(cosh t - 1)} cosh(nu t) dt.
inline double ln_bessel_k(double nu, double x) {
    if (!(x > 0.0))
        throw std::domain_error("ln_bessel_k: requires x > 0");
    nu = std::fabs(nu);

    const auto ln_cosh = [](double u) {
        u = std::fabs(u);
        return u + std::log1p(std::exp(-2.0 * u)) - 0.6931471805599453094;
    };
    const auto logf = [&](double t) {
        // cosh t - 1 without cancellation for small t
        const double sh = std::sinh(0.5 * t);
        return -2.0 * x * sh * sh + ln_cosh(nu * t);
    };

    const double tpeak = (nu > 0.0) ? std::asinh(nu / x) : 0.0;
    const double scale = logf(tpeak);

    const quad::Rule &gl = quad::gauss_legendre_m11_32();
    const double h = std::min(0.5, 2.0 / std::sqrt(std::max(x, 1.0)));
    double total = 0.0;
    int quiet = 0;
    for (int p = 0; p < 4000; ++p) {
        const double lo = p * h, hi = lo + h;
        double panel = 0.0;
        for (int k = 0; k < 32; ++k) {
            const double t = 0.5 * (lo + hi) + 0.5 * h * gl.nodes[k];
            panel += gl.weights[k] * std::exp(logf(t) - scale);
        }
        panel *= 0.5 * h;
        total += panel;
        if (hi > tpeak && panel < total * 1e-18) {
            if (++quiet >= 2)
                return -x + scale + std::log(total);
        } else {
            quiet = 0;
        }
    }
    throw numeric_error("ln_bessel_k: panel quadrature did not converge");
}

/// K_nu(x); may overflow for extreme (nu, x), use ln_bessel_k directly then.
inline double bessel_k_nu(double nu, double x) { return std::exp(ln_bessel_k(nu, x)); }

/// Lerch transcendent Phi(-y, 1, a) = int_0^1 t^{a-1}/(1 + y t) dt for y >= 0, a > 0.
/// Head interval [0, t1] by the geometric expansion of 1/(1+yt) (handles the
/// t^{a-1} branch point exactly); tail [t1, 1] by Gauss-Legendre panels split
/// geometrically around the 1/(1+yt) knee at t ~ 1/y.
inline double lerch_phi_s1(double y, double a) {
    if (!(y >= 0.0))
        throw std::domain_error("lerch_phi_s1: requires y >= 0");
    if (!(a > 0.0))
        throw std::domain_error("lerch_phi_s1: requires a > 0");

    const double t1 = (y > 0.5) ? 0.5 / y : 1.0;

    // int_0^{t1} t^{a-1} sum_k (-y t)^k dt = t1^a sum_k (-y t1)^k / (a + k)
    double head = 0.0;
    {
        const double q = -y * t1; // |q| <= 1/2
        double qk = 1.0;
        for (int k = 0; k < 80; ++k) {
            const double contrib = qk / (a + k);
            head += contrib;
            if (std::fabs(contrib) < 1e-17 * std::fabs(head))
                break;
            qk *= q;
        }
        head *= std::pow(t1, a);
    }
    if (t1 >= 1.0)
        return head;

    const quad::Rule &gl = quad::gauss_legendre_m11_32();
    double tail = 0.0;
    double lo = t1;
    for (double hi = std::min(4.0 * t1, 1.0); lo < 1.0; hi = std::min(4.0 * hi, 1.0)) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double panel = 0.0;
        for (int k = 0; k < 32; ++k) {
            const double t = mid + half * gl.nodes[k];
            panel += gl.weights[k] * std::pow(t, a - 1.0) / (1.0 + y * t);
        }
        tail += panel * half;
        lo = hi;
    }
    return head + tail;
}

} // namespace fsolink::specfun
