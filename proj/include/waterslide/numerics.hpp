#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "waterslide/detail/solve.hpp"

// Scalar information-theoretic primitives: binary entropy and its inverse,
// Gaussian tail, KL divergences, the lower Lambert-W branch, a Chernoff
// exponent constant for Bernoulli deviations, and Gallager-style error
// exponents for the binary symmetric channel. Entropies, rates and Bernoulli
// divergences are in bits; the Gaussian variance divergence is in nats.

namespace waterslide {

/// Shared stopping-rule knobs for the iterative solvers.
struct Tolerances {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_iter = 200;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
            throw std::invalid_argument("Tolerances: abs_tol and rel_tol must be positive, max_iter >= 1");
        }
    }
};

/// Binary entropy h_b(x) = -x log2 x - (1-x) log2(1-x), in bits.
inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("binary_entropy: argument must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) return 0.0;
    constexpr double ln2 = std::numbers::ln2;
    return -x * std::log2(x) - (1.0 - x) * (std::log1p(-x) / ln2);
}

/// Inverse of binary entropy on [0, 1/2]: the unique x in [0, 1/2] with
/// h_b(x) = y. Bisection until the bracket collapses below 1e-17.
inline double binary_entropy_inv(double y, const Tolerances& tol = {}) {
    tol.validate();
    if (!(y >= 0.0 && y <= 1.0)) {
        throw std::domain_error("binary_entropy_inv: argument must lie in [0, 1]");
    }
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 0.5;
    double lo = 0.0;
    double hi = 0.5;
    const int iters = tol.max_iter < 200 ? 200 : tol.max_iter;
    for (int i = 0; i < iters && hi - lo > 1e-17; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Gaussian tail Q(x) = P(N(0,1) > x) = erfc(x / sqrt(2)) / 2.
inline double q_function(double x) {
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// Inverse Gaussian tail: x with Q(x) = p, for p in (0, 1). Bisection on
/// [-40, 40], which covers every p representable in double precision.
inline double q_function_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_function_inv: argument must lie in (0, 1)");
    }
    double lo = -40.0;
    double hi = 40.0;
    for (int i = 0; i < 220; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bernoulli KL divergence D(g || p) in bits. Uses a log1p form when g is
/// close to p to avoid cancellation, the direct form otherwise.
inline double kl_bernoulli(double g, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("kl_bernoulli: reference probability must lie in (0, 1)");
    }
    if (!(g >= 0.0 && g <= 1.0)) {
        throw std::domain_error("kl_bernoulli: first argument must lie in [0, 1]");
    }
    constexpr double ln2 = std::numbers::ln2;
    if (g == 0.0) return -std::log1p(-p) / ln2;
    if (g == 1.0) return -std::log(p) / ln2;
    const double dg = g - p;
    const double near = 0.5 * (p < 1.0 - p ? p : 1.0 - p);
    double nats;
    if (std::abs(dg) < near) {
        nats = g * std::log1p(dg / p) + (1.0 - g) * std::log1p(-dg / (1.0 - p));
    } else {
        nats = g * std::log(g / p) + (1.0 - g) * std::log((1.0 - g) / (1.0 - p));
    }
    return nats / ln2;
}

/// KL divergence between zero-mean Gaussians with variances var_g and var_p,
/// in nats: (var_g/var_p - 1 - ln(var_g/var_p)) / 2.
inline double kl_gaussian_var(double var_g, double var_p) {
    if (!(var_g > 0.0) || !(var_p > 0.0)) {
        throw std::domain_error("kl_gaussian_var: variances must be positive");
    }
    const double d = (var_g - var_p) / var_p;
    return 0.5 * detail::x_minus_log1p(d);
}

/// Lower branch W_L of the Lambert W function: the solution w <= -1 of
/// w e^w = x, defined for x in [-1/e, 0). Solved as ln t - t = ln(-x) with
/// t = -w, bisected on t in [1, 760] (covers all representable inputs).
inline double lambert_w_lower(double x, const Tolerances& tol = {}) {
    tol.validate();
    if (!(x < 0.0) || x < -std::exp(-1.0)) {
        throw std::domain_error("lambert_w_lower: argument must lie in [-1/e, 0)");
    }
    double s = std::log(-x);
    if (s > -1.0) s = -1.0;  // rounding guard at the branch point
    const double target = s;
    const double t = detail::bisect_root(
        [target](double u) { return std::log(u) - u - target; }, 1.0, 760.0, 220);
    return -t;
}

/// Chernoff constant K(g) = inf over 0 < eta <= 1-g of D(g+eta || g) / eta^2,
/// in bits. Scans a geometric eta grid, then refines the argmin by
/// golden-section search in log(eta).
inline double chernoff_k(double g) {
    if (!(g > 0.0 && g < 1.0)) {
        throw std::domain_error("chernoff_k: argument must lie in (0, 1)");
    }
    const double span = 1.0 - g;
    const auto ratio = [g](double eta) {
        return kl_bernoulli(g + eta, g) / (eta * eta);
    };
    const auto etas = detail::log_spaced(1e-9 * span, span, 10000);
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < etas.size(); ++i) {
        double eta = etas[i];
        if (g + eta > 1.0) eta = span;
        const double v = ratio(eta);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const std::size_t lo_i = best > 0 ? best - 1 : best;
    const std::size_t hi_i = best + 1 < etas.size() ? best + 1 : best;
    if (lo_i == hi_i) return best_val;
    const double arg = detail::golden_max(
        [&ratio](double log_eta) { return -ratio(std::exp(log_eta)); },
        std::log(etas[lo_i]), std::log(etas[hi_i]), 80);
    const double refined = ratio(std::exp(arg));
    return refined < best_val ? refined : best_val;
}

/// Gallager function E_0(rho, p) for the binary symmetric channel with
/// uniform input, in bits:
///   E_0 = rho - (1 + rho) log2(p^{1/(1+rho)} + (1-p)^{1/(1+rho)}).
inline double gallager_e0_bsc(double rho, double p) {
    if (!(rho >= 0.0)) {
        throw std::domain_error("gallager_e0_bsc: rho must be nonnegative");
    }
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("gallager_e0_bsc: crossover must lie in (0, 1/2]");
    }
    const double q = 1.0 / (1.0 + rho);
    const double s = std::pow(p, q) + std::pow(1.0 - p, q);
    return rho - (1.0 + rho) * std::log2(s);
}

/// Random-coding error exponent E_r(R, p) = max over rho in [0, 1] of
/// E_0(rho, p) - rho R, in bits. Zero when R >= capacity.
inline double error_exponent_random(double rate, double p) {
    if (!(rate > 0.0)) {
        throw std::domain_error("error_exponent_random: rate must be positive");
    }
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("error_exponent_random: crossover must lie in (0, 1/2]");
    }
    if (rate >= 1.0 - binary_entropy(p)) return 0.0;
    const auto obj = [rate, p](double rho) { return gallager_e0_bsc(rho, p) - rho * rate; };
    constexpr int kGrid = 1024;
    double best_val = 0.0;
    int best = 0;
    for (int i = 0; i <= kGrid; ++i) {
        const double rho = static_cast<double>(i) / kGrid;
        const double v = obj(rho);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = static_cast<double>(best > 0 ? best - 1 : 0) / kGrid;
    const double hi = static_cast<double>(best < kGrid ? best + 1 : kGrid) / kGrid;
    const double arg = detail::golden_max(obj, lo, hi, 64);
    const double refined = obj(arg);
    return refined > best_val ? refined : best_val;
}

/// Sphere-packing error exponent E_sp(R, p) = sup over rho >= 0 of
/// E_0(rho, p) - rho R, in bits. The sup is searched on a geometric grid up
/// to rho = 1e4; by construction the result is never below E_r(R, p).
inline double error_exponent_sphere(double rate, double p) {
    if (!(rate > 0.0)) {
        throw std::domain_error("error_exponent_sphere: rate must be positive");
    }
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("error_exponent_sphere: crossover must lie in (0, 1/2]");
    }
    if (rate >= 1.0 - binary_entropy(p)) return 0.0;
    const auto obj = [rate, p](double rho) { return gallager_e0_bsc(rho, p) - rho * rate; };
    const auto rhos = detail::log_spaced(1e-6, 1e4, 2048);
    double best_val = 0.0;
    std::size_t best = 0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const double v = obj(rhos[i]);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const std::size_t lo_i = best > 0 ? best - 1 : best;
    const std::size_t hi_i = best + 1 < rhos.size() ? best + 1 : best;
    if (lo_i != hi_i) {
        const double arg = detail::golden_max(
            [&obj](double log_rho) { return obj(std::exp(log_rho)); },
            std::log(rhos[lo_i]), std::log(rhos[hi_i]), 64);
        const double refined = obj(std::exp(arg));
        if (refined > best_val) best_val = refined;
    }
    const double er = error_exponent_random(rate, p);
    return best_val > er ? best_val : er;
}

/// Two-sided polynomial envelopes for binary entropy and its inverse with
/// shape parameter d > 1:
///   2x <= h_b(x) <= 2 x^{1-1/d} d / ln 2            for x in [0, 1/2],
///   (y ln2 / (2d))^{d/(d-1)} <= h_b^{-1}(y) <= y/2   for y in [0, 1].
struct HbBoundPair {
    double hb_lower;
    double hb_upper;
    double hbinv_lower;
    double hbinv_upper;
};

inline HbBoundPair hb_bound_pair(double x, double y, double d) {
    if (!(d > 1.0)) {
        throw std::domain_error("hb_bound_pair: shape parameter must exceed 1");
    }
    if (!(x >= 0.0 && x <= 0.5)) {
        throw std::domain_error("hb_bound_pair: x must lie in [0, 1/2]");
    }
    if (!(y >= 0.0 && y <= 1.0)) {
        throw std::domain_error("hb_bound_pair: y must lie in [0, 1]");
    }
    constexpr double ln2 = std::numbers::ln2;
    HbBoundPair out;
    out.hb_lower = 2.0 * x;
    out.hb_upper = 2.0 * std::pow(x, 1.0 - 1.0 / d) * d / ln2;
    out.hbinv_lower = std::pow(y * ln2 / (2.0 * d), d / (d - 1.0));
    out.hbinv_upper = 0.5 * y;
    return out;
}

}  // namespace waterslide
