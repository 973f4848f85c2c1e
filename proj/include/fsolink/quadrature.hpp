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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace fsolink::quad {

enum class RuleKind { hermite, legendre };

/// Nodes strictly increasing, weights all positive.
/// hermite: weight e^{-x^2} on (-inf, inf), sum of weights = sqrt(pi).
/// legendre: remapped to [0, 1], sum of weights = 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    RuleKind kind = RuleKind::legendre;
};

/// Fixed-size rule on [-1, 1] used for panel integration.
struct Rule {
    double nodes[32];
    double weights[32];
};

namespace detail {

inline constexpr double pi_v = 3.14159265358979323846264338327950288;

// Legendre P_n and P_n' at x by recurrence.
inline void legendre_eval(int n, double x, double &p, double &dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

inline void gauss_legendre_m11(int n, std::vector<double> &x, std::vector<double> &w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(pi_v * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre_eval(n, z, p, dp);
            const double dz = p / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-15)
                break;
        }
        legendre_eval(n, z, p, dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

} // namespace detail

/// Shared 32-point Gauss-Legendre rule on [-1, 1].
inline const Rule &gauss_legendre_m11_32() {
    static const Rule rule = [] {
        std::vector<double> x, w;
        detail::gauss_legendre_m11(32, x, w);
        Rule r{};
        for (int i = 0; i < 32; ++i) {
            r.nodes[i] = x[i];
            r.weights[i] = w[i];
        }
        return r;
    }();
    return rule;
}

/// n-point Gauss-Legendre rule remapped to [0, 1].
inline QuadratureRule gauss_legendre01(int n) {
    if (n < 1 || n > 256)
        throw std::domain_error("gauss_legendre01: n outside [1, 256]");
    std::vector<double> x, w;
    detail::gauss_legendre_m11(n, x, w);
    QuadratureRule rule;
    rule.kind = RuleKind::legendre;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (x[i] + 1.0);
        rule.weights[i] = 0.5 * w[i];
    }
    return rule;
}

namespace detail {

// Orthonormal Hermite functions w.r.t. weight e^{-x^2}:
// p_{-1} = 0, p_0 = pi^{-1/4}, p_{k+1} = x sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1}.
inline double hermite_pn(int n, double x, double *pnm1 = nullptr) {
    double pm = 0.0, p = 0.7511255444649425; // pi^{-1/4}
    for (int k = 0; k < n; ++k) {
        const double pn = x * std::sqrt(2.0 / (k + 1.0)) * p - std::sqrt(k / (k + 1.0)) * pm;
        pm = p;
        p = pn;
    }
    if (pnm1)
        *pnm1 = pm;
    return p;
}

} // namespace detail

/// Physicists' Gauss-Hermite rule: exact for polynomials of degree <= 2n-1
/// against the weight e^{-x^2}. Roots located by sign-change scan plus Newton
/// on the orthonormal recurrence; weights from the Christoffel sum.
inline QuadratureRule gauss_hermite(int n) {
    if (n < 1 || n > 64)
        throw std::domain_error("gauss_hermite: n outside [1, 64]");

    QuadratureRule rule;
    rule.kind = RuleKind::hermite;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    std::vector<double> pos; // positive roots
    const double upper = std::sqrt(2.0 * n + 1.0) + 2.0;
    const int grid = 40 * n;
    const double start = (n % 2) ? 1e-12 : 0.0; // skip the origin root of odd n
    const double step = (upper - start) / grid;
    double prev_x = start;
    double prev_v = detail::hermite_pn(n, prev_x);
    for (int i = 1; i <= grid; ++i) {
        const double xx = start + i * step;
        const double vv = detail::hermite_pn(n, xx);
        if (prev_v * vv < 0.0) {
            double lo = prev_x, hi = xx, flo = prev_v;
            for (int b = 0; b < 80; ++b) {
                const double mid = 0.5 * (lo + hi);
                const double fm = detail::hermite_pn(n, mid);
                if (flo * fm <= 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            double root = 0.5 * (lo + hi);
            for (int it = 0; it < 4; ++it) { // Newton polish: p_n' = sqrt(2n) p_{n-1}
                double pm = 0.0;
                const double pv = detail::hermite_pn(n, root, &pm);
                const double dv = std::sqrt(2.0 * n) * pm;
                if (dv == 0.0)
                    break;
                root -= pv / dv;
            }
            pos.push_back(root);
        }
        prev_x = xx;
        prev_v = vv;
    }

    std::vector<double> roots;
    if (n % 2)
        roots.push_back(0.0);
    for (double rt : pos) {
        roots.push_back(rt);
        roots.push_back(-rt);
    }
    if (static_cast<int>(roots.size()) != n)
        throw numeric_error("gauss_hermite: root search failed");
    std::sort(roots.begin(), roots.end());

    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = roots[i];
        double s = 0.0;
        double pm = 0.0, p = 0.7511255444649425;
        s += p * p;
        for (int k = 0; k < n - 1; ++k) {
            const double pn =
                roots[i] * std::sqrt(2.0 / (k + 1.0)) * p - std::sqrt(k / (k + 1.0)) * pm;
            pm = p;
            p = pn;
            s += p * p;
        }
        rule.weights[i] = 1.0 / s;
    }
    return rule;
}

namespace detail {

// Gauss-Kronrod 7-15 pair (QUADPACK constants).
inline constexpr double gk_xk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(const F &f, double a, double b, double &value, double &err) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double fc = f(mid);
    double res_g = fc * gk_wg[3];
    double res_k = fc * gk_wk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk_xk[j];
        const double fsum = f(mid - dx) + f(mid + dx);
        res_k += gk_wk[j] * fsum;
        if (j % 2 == 1)
            res_g += gk_wg[j / 2] * fsum;
    }
    value = res_k * half;
    err = std::fabs((res_k - res_g) * half);
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to a relative tolerance.
/// Throws numeric_error when the subdivision budget is exhausted.
template <class F>
inline double integrate(const F &f, double a, double b, double rel_tol = 1e-10,
                        double abs_floor = 0.0, int max_intervals = 4000) {
    struct Seg {
        double a, b, value, err;
    };
    std::vector<Seg> segs;
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    segs.push_back({a, b, v0, e0});
    double total = v0, toterr = e0;

    for (int iter = 0; iter < max_intervals; ++iter) {
        if (toterr <= rel_tol * std::fabs(total) + abs_floor)
            return total;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err)
                worst = i;
        const Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        Seg left{s.a, mid, 0, 0}, right{mid, s.b, 0, 0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        total += left.value + right.value - s.value;
        toterr += left.err + right.err - s.err;
        segs[worst] = left;
        segs.push_back(right);
    }
    throw numeric_error("integrate: adaptive quadrature did not converge");
}

/// Adaptive integration over [a, inf) through the map z = a + t/(1-t).
template <class F>
inline double integrate_semi_infinite(const F &f, double a, double rel_tol = 1e-10,
                                      double abs_floor = 0.0) {
    const auto g = [&](double t) {
        const double om = 1.0 - t;
        return f(a + t / om) / (om * om);
    };
    return integrate(g, 0.0, 1.0 - 1e-14, rel_tol, abs_floor);
}

} // namespace fsolink::quad
