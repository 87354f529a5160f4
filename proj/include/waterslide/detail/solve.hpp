#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Small deterministic solver kit shared by the library headers. Everything
// runs a fixed iteration budget so results are bitwise reproducible across
// platforms with the same FP semantics.

namespace waterslide::detail {

/// x - log1p(x), computed without cancellation for small |x|.
/// Equals the series x^2/2 - x^3/3 + x^4/4 - ... and is >= 0 for x > -1.
inline double x_minus_log1p(double x) {
    if (std::abs(x) > 1e-4) {
        return x - std::log1p(x);
    }
    const double x2 = x * x;
    return x2 * (0.5 + x * (-1.0 / 3.0 + x * (0.25 + x * (-0.2 + x / 6.0))));
}

/// Root of f on [lo, hi] by bisection. Requires sign(f(lo)) != sign(f(hi));
/// keeps the bracket invariant and returns the midpoint of the final bracket.
template <class F>
double bisect_root(F&& f, double lo, double hi, int iters = 200) {
    const double flo = f(lo);
    if (flo == 0.0) return lo;
    const bool lo_nonpos = (flo <= 0.0);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double fm = f(mid);
        if ((fm <= 0.0) == lo_nonpos) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Argmax of a unimodal f on [lo, hi] by golden-section search with a fixed
/// iteration count. Returns the abscissa of the better interior probe.
template <class F>
double golden_max(F&& f, double lo, double hi, int iters = 64) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

/// count geometrically spaced points covering [lo, hi], endpoints exact.
/// Requires lo > 0, hi > lo, count >= 2.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = std::exp(llo + (lhi - llo) * t);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

/// Solve v - log1p(v) = s for the nonnegative root (s >= 0). Newton from
/// v0 = sqrt(2 s) + s, which sits at or above the root, so the iteration
/// descends monotonically; converges in a handful of steps.
inline double solve_v_minus_log1p(double s) {
    if (!(s > 0.0)) return 0.0;
    double v = std::sqrt(2.0 * s) + s;
    for (int i = 0; i < 60; ++i) {
        const double f = x_minus_log1p(v) - s;
        const double step = f * (1.0 + v) / v;
        v -= step;
        if (!(v > 0.0)) {
            v = 5e-324;
            break;
        }
        if (std::abs(step) <= 1e-16 * (1.0 + v)) break;
    }
    return v;
}

}  // namespace waterslide::detail
