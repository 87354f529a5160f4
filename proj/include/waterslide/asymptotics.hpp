#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "waterslide/bounds.hpp"
#include "waterslide/channels.hpp"
#include "waterslide/numerics.hpp"

// Scaling of the required neighborhood size as the system closes in on
// capacity. The gap to capacity is split between rate backoff and residual
// error; with total gap -> 0 and target pe = gap^beta (or the balanced
// split), the converse forces n to grow. A single well-chosen test channel
// turns the converse into a quadratic inequality in sqrt(n) whose closed
// form exposes the growth law; small-gap Taylor companions to its
// coefficients make the law explicit.

namespace waterslide {

/// Split of the capacity gap of an operating point (rate, pe): the first
/// component is the capacity equivalent of tolerating error pe (via the
/// rate-distortion line C/(1 - h_b(pe))), the second is the rate backoff
/// C - rate. Both are nonnegative for feasible operating points.
inline std::pair<double, double> gap_decomposition(double capacity, double rate, double pe) {
    if (!(capacity > 0.0)) {
        throw std::domain_error("gap_decomposition: capacity must be positive");
    }
    if (!(pe >= 0.0 && pe < 0.5)) {
        throw std::domain_error("gap_decomposition: pe must lie in [0, 1/2)");
    }
    if (!(rate > 0.0)) {
        throw std::domain_error("gap_decomposition: rate must be positive");
    }
    const double denom = 1.0 - binary_entropy(pe);
    return {capacity / denom - capacity, capacity - rate};
}

/// The error probability at which the two gap components are equal when the
/// total gap is `gap`: h_b(pe) = gap / (capacity + gap).
inline double balanced_gap_pe(double capacity, double gap) {
    if (!(capacity > 0.0) || !(gap > 0.0)) {
        throw std::domain_error("balanced_gap_pe: capacity and gap must be positive");
    }
    return binary_entropy_inv(gap / (capacity + gap));
}

/// Coefficients of the converse inequality a n + b sqrt(n) + c >= 0 in
/// sqrt(n). a and c are in bits for the BSC and in nats for AWGN.
struct QuadraticCoeffs {
    double a;
    double b;
    double c;
    ChannelKind kind;
};

/// Smallest n satisfying a n + b sqrt(n) + c >= 0 with a > 0, b >= 0.
/// Zero when the inequality already holds at n = 0.
inline double quadratic_sqrt_n_lower(const QuadraticCoeffs& q) {
    if (!(q.a > 0.0)) {
        throw std::domain_error("quadratic_sqrt_n_lower: leading coefficient must be positive");
    }
    const double disc = q.b * q.b - 4.0 * q.a * q.c;
    if (!(disc > 0.0)) return 0.0;
    const double s = (-q.b + std::sqrt(disc)) / (2.0 * q.a);
    return s > 0.0 ? s * s : 0.0;
}

/// How the operating point approaches capacity: total gap, the error-target
/// law pe = gap^beta (or the balanced split), the test-channel placement
/// exponent r (test channel offset scales as gap^r), and the entropy
/// envelope shape d behind the default choice of r.
struct GapSpec {
    double gap;
    double beta = 1.0;
    bool balanced = false;
    double r;
    double d = 10.0;

    static double default_r(double beta, double d) {
        const double cap = beta * (d - 1.0) / d;
        return 0.9 * (cap < 1.0 ? cap : 1.0);
    }

    static GapSpec power_law(double gap, double beta,
                             double r = std::numeric_limits<double>::quiet_NaN(),
                             double d = 10.0) {
        GapSpec s;
        s.gap = gap;
        s.beta = beta;
        s.balanced = false;
        s.d = d;
        s.r = std::isnan(r) ? default_r(beta, d) : r;
        s.validate();
        return s;
    }

    static GapSpec balanced_split(double gap,
                                  double r = std::numeric_limits<double>::quiet_NaN(),
                                  double d = 10.0) {
        GapSpec s;
        s.gap = gap;
        s.beta = 1.0;
        s.balanced = true;
        s.d = d;
        s.r = std::isnan(r) ? default_r(1.0, d) : r;
        s.validate();
        return s;
    }

    void validate() const {
        if (!(gap > 0.0)) {
            throw std::invalid_argument("GapSpec: gap must be positive");
        }
        if (!(beta > 0.0)) {
            throw std::invalid_argument("GapSpec: beta must be positive");
        }
        if (!(r > 0.0 && r < 1.0)) {
            throw std::invalid_argument("GapSpec: r must lie in (0, 1)");
        }
        if (!(d > 1.0)) {
            throw std::invalid_argument("GapSpec: d must exceed 1");
        }
    }
};

/// Exact and small-gap-approximate quadratic coefficients for one gap spec,
/// plus the test-channel placement they came from. log_pe_target shares the
/// log base of the c coefficients (log2 for BSC, natural log for AWGN).
struct GapCoeffs {
    QuadraticCoeffs exact;
    QuadraticCoeffs approx;
    double test_param;  // test crossover g* (BSC) or variance ratio (AWGN)
    double delta;
    double rate;
    double log_pe_target;
    bool feasible;
};

/// BSC quadratic coefficients at base crossover p: the test channel sits at
/// g* = p + gap^r. Exact coefficients evaluate the converse there; the
/// approximate ones replace divergence, likelihood slope, and delta with
/// their leading small-gap expansions around p.
inline GapCoeffs bsc_gap_coeffs(const GapSpec& spec, double p) {
    spec.validate();
    if (!(p > 0.0 && p < 0.5)) {
        throw std::domain_error("bsc_gap_coeffs: crossover must lie in (0, 1/2)");
    }
    constexpr double ln2 = std::numbers::ln2;
    GapCoeffs out{};
    out.feasible = false;
    out.exact.kind = out.approx.kind = ChannelKind::bsc_from_bpsk_hard;

    const double cp = 1.0 - binary_entropy(p);
    const double rate = cp - spec.gap;
    const double step = std::pow(spec.gap, spec.r);
    const double g_star = p + step;
    out.test_param = g_star;
    out.rate = rate;
    if (!(rate > 0.0) || !(g_star < 0.5)) return out;

    const double cg = 1.0 - binary_entropy(g_star);
    const double delta = 1.0 - cg / rate;
    out.delta = delta;
    if (!(delta > 0.0 && delta <= 1.0)) return out;

    const double lpe = spec.balanced ? std::log2(balanced_gap_pe(cp, spec.gap))
                                     : spec.beta * std::log2(spec.gap);
    out.log_pe_target = lpe;

    const double x = binary_entropy_inv(delta);
    out.exact.a = kl_bernoulli(g_star, p);
    const double eps = std::sqrt((1.0 - std::log2(x)) / chernoff_k(g_star));
    out.exact.b = eps * std::log2(g_star * (1.0 - p) / (p * (1.0 - g_star)));
    out.exact.c = lpe + 1.0 - std::log2(x);

    const double hbp = std::log2((1.0 - p) / p);
    double delta_app = hbp * step / cp;
    if (delta_app > 1.0) delta_app = 1.0;
    const double x_app = binary_entropy_inv(delta_app);
    out.approx.a = step * step / (2.0 * p * (1.0 - p) * ln2);
    const double eps_app = std::sqrt((1.0 - std::log2(x_app)) / chernoff_k(p));
    out.approx.b = eps_app * step / (p * (1.0 - p) * ln2);
    out.approx.c = lpe + 1.0 - std::log2(x_app);

    out.feasible = true;
    return out;
}

/// AWGN quadratic coefficients at operating SNR snr (true noise variance
/// normalized to 1): the test channel's variance ratio sits at
/// 1 + gap^r * 2 (snr + 1) / snr. Coefficients are in nats.
inline GapCoeffs awgn_gap_coeffs(const GapSpec& spec, double snr) {
    spec.validate();
    if (!(snr > 0.0)) {
        throw std::domain_error("awgn_gap_coeffs: snr must be positive");
    }
    constexpr double ln2 = std::numbers::ln2;
    GapCoeffs out{};
    out.feasible = false;
    out.exact.kind = out.approx.kind = ChannelKind::awgn;

    const double cp = 0.5 * std::log1p(snr) / ln2;
    const double rate = cp - spec.gap;
    const double zeta_off = std::pow(spec.gap, spec.r) * 2.0 * (snr + 1.0) / snr;
    const double vr_star = 1.0 + zeta_off;
    out.test_param = vr_star;
    out.rate = rate;
    if (!(rate > 0.0)) return out;

    const double cg = 0.5 * std::log1p(snr / vr_star) / ln2;
    const double delta = 1.0 - cg / rate;
    out.delta = delta;
    if (!(delta > 0.0 && delta <= 1.0)) return out;

    const double lpe = spec.balanced ? std::log(balanced_gap_pe(cp, spec.gap))
                                     : spec.beta * std::log(spec.gap);
    out.log_pe_target = lpe;

    const double x = binary_entropy_inv(delta);
    out.exact.a = 0.5 * detail::x_minus_log1p(zeta_off);
    out.exact.b = (1.5 + 2.0 * std::log(2.0 / x)) * zeta_off;
    out.exact.c = lpe + ln2 - std::log(x);

    const double c_nats = 0.5 * std::log1p(snr);
    double delta_app = std::pow(spec.gap, spec.r) / c_nats;
    if (delta_app > 1.0) delta_app = 1.0;
    const double x_app = binary_entropy_inv(delta_app);
    const double ratio = (snr + 1.0) / snr;
    out.approx.a = ratio * ratio * std::pow(spec.gap, 2.0 * spec.r);
    out.approx.b = (1.5 + 2.0 * std::log(2.0 / x_app)) * zeta_off;
    out.approx.c = lpe + ln2 - std::log(x_app);

    out.feasible = true;
    return out;
}

/// One point of the n-versus-gap curve.
struct GapCurvePoint {
    double gap;
    double n;
    bool feasible;
};

/// Required neighborhood size as the gap closes, with rate = C - gap and
/// target pe = gap^beta (or the balanced split). Uses the full converse via
/// min_neighborhood, not the single-test-channel quadratic.
inline std::vector<GapCurvePoint> n_vs_gap_curve(double beta, bool balanced,
                                                 const ChannelPoint& base,
                                                 const std::vector<double>& gap_grid,
                                                 BoundVariant variant = BoundVariant::combined) {
    if (!(beta > 0.0)) {
        throw std::domain_error("n_vs_gap_curve: beta must be positive");
    }
    const double cp = capacity(base);
    std::vector<GapCurvePoint> out;
    out.reserve(gap_grid.size());
    for (const double gap : gap_grid) {
        GapCurvePoint pt{gap, std::numeric_limits<double>::quiet_NaN(), false};
        if (gap > 0.0 && cp - gap > 0.0) {
            const double rate = cp - gap;
            const double target = balanced ? balanced_gap_pe(cp, gap) : std::pow(gap, beta);
            if (target > 0.0 && target < 0.5) {
                const double n = min_neighborhood(rate, base, target, variant);
                pt.n = n;
                pt.feasible = std::isfinite(n);
            }
        }
        out.push_back(pt);
    }
    return out;
}

/// Least-squares slope of log2(n) against log2(gap) over the feasible
/// points of a gap curve. Needs at least two usable points.
inline double fitted_slope(const std::vector<GapCurvePoint>& curve) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (const auto& pt : curve) {
        if (!pt.feasible || !(pt.n > 0.0) || !std::isfinite(pt.n) || !(pt.gap > 0.0)) continue;
        const double x = std::log2(pt.gap);
        const double y = std::log2(pt.n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) {
        throw std::invalid_argument("fitted_slope: need at least two feasible points");
    }
    const double dm = static_cast<double>(m);
    const double denom = dm * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) {
        throw std::invalid_argument("fitted_slope: gap values must not be all equal");
    }
    return (dm * sxy - sx * sy) / denom;
}

}  // namespace waterslide
