#pragma once

// Bracketed scalar root finding (Brent's method: inverse quadratic
// interpolation and secant steps guarded by bisection).

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resetting/error.hpp"

namespace resetting {

struct RootOptions {
    double abs_tol = 0.0;
    double rel_tol = 4.0 * std::numeric_limits<double>::epsilon();
    int max_iterations = 300;
};

struct RootResult {
    double root;
    double value;
    int iterations;
};

/// Root of f in [lo, hi]; f(lo) and f(hi) must differ in sign.
template <class F>
RootResult brent_root(F&& f, double lo, double hi, const RootOptions& opt = {}) {
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
        fail(ErrorCategory::domain, "root not bracketed on [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
    }
    double c = b;
    double fc = fb;
    double d = b - a;
    double e = d;
    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 0.5 * (opt.abs_tol + opt.rel_tol * std::abs(b)) +
                           std::numeric_limits<double>::denorm_min();
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0) return {b, fb, iter};

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double rb = fb / fc;
                p = s * (2.0 * xm * qa * (qa - rb) - (b - a) * (rb - 1.0));
                q = (qa - 1.0) * (rb - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : std::copysign(tol, xm);
        fb = f(b);
    }
    fail(ErrorCategory::non_convergence,
         "Brent iteration cap reached (" + std::to_string(opt.max_iterations) + ")");
}

/// Plain bisection; used as an independent oracle.
template <class F>
double bisect_root(F&& f, double lo, double hi, int iterations = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if ((flo > 0.0) == (f(hi) > 0.0)) fail(ErrorCategory::domain, "bisection: root not bracketed");
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace resetting
