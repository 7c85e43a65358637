#pragma once

// Adaptive quadrature on finite intervals: globally adaptive Gauss-Kronrod
// (7/15 points, QUADPACK-style error estimate) and recursive adaptive Simpson.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "resetting/error.hpp"

namespace resetting {

struct QuadratureOptions {
    double abs_tol = 0.0;
    double rel_tol = 1.0e-10;
    int max_subdivisions = 4000;
};

struct QuadratureResult {
    double value;
    double error;
    int evaluations;
};

namespace detail {

// Kronrod abscissae (descending from 1) and weights; Gauss weights for the
// odd-indexed nodes.
inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * gk15_wk[7];
    double gauss = fc * gk15_wg[3];
    double abs_k = std::abs(kronrod);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk15_x[j];
        f1[j] = f(centre - dx);
        f2[j] = f(centre + dx);
        const double s = f1[j] + f2[j];
        kronrod += gk15_wk[j] * s;
        abs_k += gk15_wk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += gk15_wg[j / 2] * s;
    }
    const double mean = 0.5 * kronrod;
    double asc = gk15_wk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        asc += gk15_wk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double value = kronrod * half;
    asc *= std::abs(half);
    abs_k *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_k > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * abs_k, err);
    }
    return {a, b, value, err};
}

} // namespace detail

/// Integral of f over [a, b] split at the given breakpoints (sorted, inclusive
/// of both ends), refined globally by bisecting the worst segment.
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> breakpoints, const QuadratureOptions& opt = {}) {
    require(breakpoints.size() >= 2, "integrate: need at least two breakpoints");
    std::priority_queue<detail::Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    int evaluations = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        const auto seg = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
        evaluations += 15;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }
    int subdivisions = static_cast<int>(heap.size());
    while (!heap.empty() && total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (subdivisions >= opt.max_subdivisions) {
            fail(ErrorCategory::non_convergence,
                 "quadrature did not reach tolerance, error estimate " + std::to_string(total_err));
        }
        const auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) break;
        heap.pop();
        const auto left = detail::gk15(f, worst.a, mid);
        const auto right = detail::gk15(f, mid, worst.b);
        evaluations += 30;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of the incremental updates.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    return {total, total_err, evaluations};
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    const std::array<double, 2> ends{a, b};
    return integrate(f, std::span<const double>(ends), opt);
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Recursive adaptive Simpson with Richardson correction.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 30) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

} // namespace resetting
