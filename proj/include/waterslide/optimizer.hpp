#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "waterslide/bounds.hpp"
#include "waterslide/channels.hpp"
#include "waterslide/classical.hpp"
#include "waterslide/errors.hpp"

// Joint transmit-plus-decoding power optimization. The decoder power model
// is P_dec = gamma * log2(n): neighborhood size n needs about
// log_alpha(n) iterations, each costing gamma * log2(alpha) in
// noise-normalized units. Total power is snr + gamma * log2(n(snr)), with
// n(snr) the converse-mandated minimum neighborhood for the target Pe. The
// asymptotic optimality condition for the transmit SNR as the target error
// probability vanishes is f(snr)/f'(snr) = gamma, where f is the divergence
// between the capacity-matching test channel and the true channel.

namespace waterslide {

/// Physical-constant bundle behind the normalized weight gamma:
/// gamma = xi_d * e_node / (sigma_p2 * xi_t * log2(alpha)).
struct RawTechnology {
    double xi_t;      // transmit path loss (linear)
    double xi_d;      // decoder energy scale factor (dimensionless)
    double e_node;    // energy per node operation, joules
    double sigma_p2;  // noise power at the detector, joules per sample
};

/// Normalized technology weights: gamma multiplies log2(n) to give decoder
/// power in transmit-SNR units, alpha is the per-iteration neighborhood
/// growth factor. The optional raw bundle, when present, must reproduce
/// gamma to within 1e-9 relative.
struct TechnologyWeights {
    double gamma = 0.3;
    double alpha = 4.0;
    std::optional<RawTechnology> raw;

    static double gamma_from_raw(const RawTechnology& r, double alpha) {
        return r.xi_d * r.e_node / (r.sigma_p2 * r.xi_t * std::log2(alpha));
    }

    static TechnologyWeights from_raw(const RawTechnology& r, double alpha) {
        TechnologyWeights w;
        w.alpha = alpha;
        w.gamma = gamma_from_raw(r, alpha);
        w.raw = r;
        w.validate();
        return w;
    }

    void validate() const {
        if (!(gamma > 0.0)) {
            throw std::invalid_argument("TechnologyWeights: gamma must be positive");
        }
        if (!(alpha > 1.0)) {
            throw std::invalid_argument("TechnologyWeights: alpha must exceed 1");
        }
        if (raw) {
            const double g = gamma_from_raw(*raw, alpha);
            if (!(std::abs(g - gamma) <= 1e-9 * std::abs(gamma))) {
                throw std::invalid_argument(
                    "TechnologyWeights: raw constants disagree with gamma");
            }
        }
    }
};

/// One point of the total-power lower-bound curve.
struct WaterslidePoint {
    double target_pe;
    double snr_transmit;
    double n;
    double iterations;
    double decode_power_norm;
    double total_norm;
    bool feasible;
};

/// Minimize snr + gamma * log2(n_min(snr)) over transmit SNR for one target
/// error probability. Sweeps a geometric SNR grid above the Shannon
/// threshold, then refines around the best node. Throws infeasible_error
/// when no SNR in the search range reaches the target.
inline WaterslidePoint total_power_lower(double rate, const TechnologyWeights& weights,
                                         double target_pe, ChannelKind kind,
                                         BoundVariant variant = BoundVariant::combined) {
    weights.validate();
    if (!(target_pe > 0.0 && target_pe < 0.5)) {
        throw std::domain_error("total_power_lower: target_pe must lie in (0, 1/2)");
    }
    const double inf = std::numeric_limits<double>::infinity();
    const auto n_at = [&](double snr) {
        return min_neighborhood(rate, ChannelPoint{kind, snr}, target_pe, variant);
    };
    const auto total_at = [&](double snr) {
        const double n = n_at(snr);
        if (!std::isfinite(n)) return inf;
        return snr + weights.gamma * std::log2(n);
    };

    const double thr = min_snr_for_rate(rate, kind);
    const auto grid = detail::log_spaced(thr * (1.0 + 1e-9), thr * 1e3, 64);
    double best_val = inf;
    std::size_t best = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = total_at(grid[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == grid.size()) {
        throw infeasible_error(
            "total_power_lower: target error probability unreachable in the SNR search range");
    }
    double snr_star = grid[best];
    const std::size_t lo_i = best > 0 ? best - 1 : best;
    const std::size_t hi_i = best + 1 < grid.size() ? best + 1 : best;
    if (lo_i < hi_i) {
        const double arg = detail::golden_max(
            [&](double ls) { return -total_at(std::exp(ls)); },
            std::log(grid[lo_i]), std::log(grid[hi_i]), 48);
        if (total_at(std::exp(arg)) < best_val) snr_star = std::exp(arg);
    }
    const double n = n_at(snr_star);
    if (!std::isfinite(n)) {
        throw infeasible_error("total_power_lower: refinement left the feasible region");
    }
    const double decode = weights.gamma * std::log2(n);
    const double iters = std::log2(n) / std::log2(weights.alpha);
    return WaterslidePoint{target_pe, snr_star, n, iters, decode, snr_star + decode, true};
}

/// Total-power lower-bound curve over a strictly decreasing grid of target
/// error probabilities. Infeasible targets yield feasible = false points
/// rather than aborting the sweep.
inline std::vector<WaterslidePoint> waterslide_curve(double rate,
                                                     const TechnologyWeights& weights,
                                                     const std::vector<double>& pe_grid,
                                                     ChannelKind kind,
                                                     BoundVariant variant = BoundVariant::combined) {
    weights.validate();
    if (pe_grid.empty()) {
        throw std::invalid_argument("waterslide_curve: pe grid must be nonempty");
    }
    for (std::size_t i = 0; i < pe_grid.size(); ++i) {
        if (!(pe_grid[i] > 0.0 && pe_grid[i] < 0.5)) {
            throw std::invalid_argument("waterslide_curve: pe values must lie in (0, 1/2)");
        }
        if (i > 0 && !(pe_grid[i] < pe_grid[i - 1])) {
            throw std::invalid_argument("waterslide_curve: pe grid must be strictly decreasing");
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<WaterslidePoint> out;
    out.reserve(pe_grid.size());
    for (const double pe : pe_grid) {
        try {
            out.push_back(total_power_lower(rate, weights, pe, kind, variant));
        } catch (const infeasible_error&) {
            out.push_back(WaterslidePoint{pe, nan, nan, nan, nan, nan, false});
        }
    }
    return out;
}

/// Divergence between the capacity-matching test channel and the true
/// channel at transmit SNR snr. BSC: D(h_b^{-1}(1 - rate) || p(snr)) in
/// bits. AWGN: D(snr / (2^{2 rate} - 1) || 1) in nats (test noise variance
/// over true). Zero exactly at the Shannon threshold, increasing above it.
inline double divergence_at_capacity(double rate, double snr, ChannelKind kind) {
    switch (kind) {
        case ChannelKind::bsc_from_bpsk_hard: {
            if (!(rate > 0.0 && rate < 1.0)) {
                throw std::domain_error("divergence_at_capacity: BSC rate must lie in (0, 1)");
            }
            const double g = binary_entropy_inv(1.0 - rate);
            const double p = crossover_from_snr(snr);
            return kl_bernoulli(g, p);
        }
        case ChannelKind::awgn: {
            if (!(rate > 0.0) || !(snr > 0.0)) {
                throw std::domain_error("divergence_at_capacity: rate and snr must be positive");
            }
            const double s_min = std::expm1(2.0 * rate * std::numbers::ln2);
            return kl_gaussian_var(snr / s_min, 1.0);
        }
    }
    throw std::invalid_argument("divergence_at_capacity: unknown channel kind");
}

/// Asymptotically optimal transmit SNR as the target error probability
/// vanishes: the solution above the Shannon threshold of
/// f(snr)/f'(snr) = gamma, with f = divergence_at_capacity. The derivative
/// is a central difference with relative step 1e-6; the returned root makes
/// |f - gamma f'| <= 1e-6 gamma f' grade residuals in practice.
inline double asymptotic_transmit_snr(double rate, double gamma, ChannelKind kind) {
    if (!(gamma > 0.0)) {
        throw std::domain_error("asymptotic_transmit_snr: gamma must be positive");
    }
    const double thr = min_snr_for_rate(rate, kind);
    const auto f = [&](double z) { return divergence_at_capacity(rate, z, kind); };
    const auto resid = [&](double z) {
        const double h = 1e-6;
        const double fp = (f(z * (1.0 + h)) - f(z * (1.0 - h))) / (2.0 * h * z);
        return f(z) - gamma * fp;
    };
    double lo = thr * (1.0 + 1e-12);
    double hi = thr * (1.0 + 1e-9);
    int guard = 0;
    while (resid(hi) <= 0.0 && guard++ < 250) hi *= 2.0;
    if (resid(hi) <= 0.0) {
        throw std::runtime_error("asymptotic_transmit_snr: failed to bracket the balance point");
    }
    const double lz = detail::bisect_root(
        [&](double u) { return resid(std::exp(u)); }, std::log(lo), std::log(hi), 200);
    return std::exp(lz);
}

/// Error probability below which coding beats uncoded transmission on total
/// power: the fixed point pe* of
///   pe = repetition_pe(waterfall_snr(rate, pe) + gamma * log2(alpha), 1/rate).
/// The uncoded side repeats each bit 1/rate times (an odd integer) with
/// majority detection and gets the coded decoder's power budget as extra
/// transmit power. adjusted = false freezes the waterfall side at the
/// zero-error Shannon threshold instead. Damped fixed-point iteration in
/// log pe, with a bisection fallback; returns NaN if no crossing exists.
inline double uncoded_coding_threshold(double rate, double gamma, double alpha,
                                       ChannelKind kind, bool adjusted = true) {
    if (!(gamma > 0.0)) {
        throw std::domain_error("uncoded_coding_threshold: gamma must be positive");
    }
    if (!(alpha > 1.0)) {
        throw std::domain_error("uncoded_coding_threshold: alpha must exceed 1");
    }
    const double rr = 1.0 / rate;
    const long long reps_ll = std::llround(rr);
    if (std::abs(rr - static_cast<double>(reps_ll)) > 1e-9 || reps_ll < 1 || reps_ll % 2 == 0) {
        throw std::invalid_argument("uncoded_coding_threshold: 1/rate must be an odd integer");
    }
    const int reps = static_cast<int>(reps_ll);
    const double boost = gamma * std::log2(alpha);
    const auto map_log = [&](double x) {
        const double pe = std::exp(x);
        const double base = adjusted ? shannon_waterfall_snr(rate, pe, kind)
                                     : min_snr_for_rate(rate, kind);
        return std::log(repetition_pe(base + boost, reps));
    };

    double x = std::log(0.25);
    bool converged = false;
    for (int i = 0; i < 200; ++i) {
        const double nx = 0.5 * (x + map_log(x));
        const double dx = std::abs(nx - x);
        x = nx;
        if (dx <= 1e-13) {
            converged = true;
            break;
        }
    }
    if (converged) return std::exp(x);

    const double lo = std::log(1e-300);
    const double hi = std::log(0.5 * (1.0 - 1e-9));
    const auto fp = [&](double u) { return map_log(u) - u; };
    if (!(fp(lo) > 0.0) || !(fp(hi) < 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::exp(detail::bisect_root(fp, lo, hi, 200));
}

}  // namespace waterslide
