#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "waterslide/channels.hpp"
#include "waterslide/errors.hpp"
#include "waterslide/numerics.hpp"

// Classical coded-system baselines over the hard-detected BPSK channel:
// repetition with majority vote, block codes under ML decoding, and
// convolutional codes under Viterbi or sequential decoding. For each scheme
// the error probability model, a decoding-power model (normalized to the
// noise power, like the transmit SNR), and a joint transmit-plus-decoding
// power optimizer for a target error probability. "Magic" variants keep a
// code's error exponent but charge only linear-time decoding work; they
// serve as optimistic what-if baselines.

namespace waterslide {

enum class SchemeKind {
    repetition,
    block_ml,
    viterbi,
    magic_sequential,
    magic_syndrome,
};

struct ClassicalScheme {
    SchemeKind kind;
    double rate;
    double energy_per_op;

    void validate() const {
        if (!(rate > 0.0 && rate < 1.0)) {
            throw std::invalid_argument("ClassicalScheme: rate must lie in (0, 1)");
        }
        if (!(energy_per_op >= 0.0)) {
            throw std::invalid_argument("ClassicalScheme: energy per operation must be nonnegative");
        }
    }
};

/// Exact majority-vote error probability of an odd-length repetition code
/// over the hard-detected BPSK channel at the given linear SNR.
inline double repetition_pe(double snr, int reps) {
    if (reps < 1 || reps % 2 == 0) {
        throw std::invalid_argument("repetition_pe: repetition count must be odd and >= 1");
    }
    const double p = crossover_from_snr(snr);
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lg_all = std::lgamma(static_cast<double>(reps) + 1.0);
    double sum = 0.0;
    // Terms grow toward the majority boundary; accumulate small-to-large.
    for (int k = reps; k >= (reps + 1) / 2; --k) {
        const double lchoose = lg_all - std::lgamma(static_cast<double>(k) + 1.0) -
                               std::lgamma(static_cast<double>(reps - k) + 1.0);
        sum += std::exp(lchoose + k * lp + (reps - k) * lq);
    }
    return sum < 1.0 ? sum : 1.0;
}

/// Convolutional (sequential-decoding cutoff) exponent: the value E_0(rho*)
/// at the rho* > 0 solving E_0(rho, p) = rho * rate. Zero when the rate is
/// at or above capacity. E_0 is concave with slope capacity at rho = 0, so
/// the positive crossing is unique.
inline double conv_error_exponent(double rate, double p) {
    if (!(rate > 0.0 && rate < 1.0)) {
        throw std::domain_error("conv_error_exponent: rate must lie in (0, 1)");
    }
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("conv_error_exponent: crossover must lie in (0, 1/2]");
    }
    if (rate >= 1.0 - binary_entropy(p)) return 0.0;
    const auto h = [rate, p](double rho) { return gallager_e0_bsc(rho, p) - rho * rate; };
    double hi = 1.0;
    int guard = 0;
    while (h(hi) > 0.0 && guard++ < 80) hi *= 2.0;
    if (h(hi) > 0.0) {
        throw std::runtime_error("conv_error_exponent: failed to bracket the crossing");
    }
    const double rho_star = detail::bisect_root(h, 1e-12, hi, 200);
    return gallager_e0_bsc(rho_star, p);
}

/// log2 of the scheme's (modeled) bit error probability. size is the
/// blocklength for block-structured schemes and the constraint length for
/// convolutional ones; it must be an odd integer for repetition. Returns 0
/// (Pe = 1) when the scheme has no reliability at this SNR. Block-structured
/// schemes use the random-coding exponent, or the sphere-packing exponent
/// when use_sphere_packing is set.
inline double scheme_pe(const ClassicalScheme& scheme, double size, double snr,
                        bool use_sphere_packing = false) {
    scheme.validate();
    if (!(size >= 0.0)) {
        throw std::domain_error("scheme_pe: size must be nonnegative");
    }
    if (!(snr >= 0.0)) {
        throw std::domain_error("scheme_pe: snr must be nonnegative");
    }
    const double p = crossover_from_snr(snr);
    switch (scheme.kind) {
        case SchemeKind::repetition: {
            const long long reps = std::llround(size);
            if (std::abs(size - static_cast<double>(reps)) > 1e-9 || reps < 1 || reps % 2 == 0) {
                throw std::invalid_argument("scheme_pe: repetition size must be an odd integer");
            }
            return std::log2(repetition_pe(snr, static_cast<int>(reps)));
        }
        case SchemeKind::block_ml:
        case SchemeKind::magic_syndrome: {
            const double ex = use_sphere_packing ? error_exponent_sphere(scheme.rate, p)
                                                 : error_exponent_random(scheme.rate, p);
            if (!(ex > 0.0)) return 0.0;
            return -size * ex;
        }
        case SchemeKind::viterbi:
        case SchemeKind::magic_sequential: {
            const double ec = conv_error_exponent(scheme.rate, p);
            if (!(ec > 0.0)) return 0.0;
            return -(size / scheme.rate) * ec;
        }
    }
    throw std::invalid_argument("scheme_pe: unknown scheme kind");
}

/// Decoding power per information bit, normalized to the noise power.
/// Majority vote is free; ML and Viterbi pay for exponentially many
/// codeword/state operations; the magic variants pay linear work only.
inline double scheme_decode_power(const ClassicalScheme& scheme, double size) {
    scheme.validate();
    if (!(size >= 0.0)) {
        throw std::domain_error("scheme_decode_power: size must be nonnegative");
    }
    const double e = scheme.energy_per_op;
    const double r = scheme.rate;
    switch (scheme.kind) {
        case SchemeKind::repetition:
            return 0.0;
        case SchemeKind::block_ml:
        case SchemeKind::viterbi: {
            const double k = size * r;
            if (k > 1020.0) return std::numeric_limits<double>::infinity();
            return e * std::exp2(k) * k;
        }
        case SchemeKind::magic_sequential:
            return e * size * r;
        case SchemeKind::magic_syndrome:
            return e * (1.0 - r) * size * r;
    }
    throw std::invalid_argument("scheme_decode_power: unknown scheme kind");
}

/// A scheme tuned to a target error probability: the transmit SNR and
/// size minimizing transmit-plus-decoding power.
struct OptimizedScheme {
    double snr;
    double size;
    double size_rounded;
    double decode_power;
    double total_power;
    bool feasible;
};

/// Minimize snr + decode_power over the scheme's free parameters subject to
/// Pe <= target_pe. For repetition the repetition count is pinned to 1/rate
/// (which must be an odd integer) and only the SNR moves; for the other
/// schemes the size needed at each SNR follows from the error exponent and
/// the SNR is swept above the Shannon threshold.
inline OptimizedScheme optimize_scheme(const ClassicalScheme& scheme, double target_pe,
                                       bool use_sphere_packing = false) {
    scheme.validate();
    if (!(target_pe > 0.0 && target_pe < 0.5)) {
        throw std::domain_error("optimize_scheme: target_pe must lie in (0, 1/2)");
    }
    const double inf = std::numeric_limits<double>::infinity();
    const double a_bits = -std::log2(target_pe);

    if (scheme.kind == SchemeKind::repetition) {
        const double rr = 1.0 / scheme.rate;
        const long long reps = std::llround(rr);
        if (std::abs(rr - static_cast<double>(reps)) > 1e-9 || reps < 1 || reps % 2 == 0) {
            throw std::invalid_argument(
                "optimize_scheme: repetition needs 1/rate to be an odd integer");
        }
        const int r = static_cast<int>(reps);
        double hi = 1.0;
        int guard = 0;
        while (repetition_pe(hi, r) > target_pe && guard++ < 200) hi *= 2.0;
        const double snr = detail::bisect_root(
            [r, target_pe](double s) { return repetition_pe(s, r) - target_pe; }, 0.0, hi, 200);
        return OptimizedScheme{snr, static_cast<double>(r), static_cast<double>(r),
                               0.0, snr, true};
    }

    const auto size_at = [&](double snr) {
        const double p = crossover_from_snr(snr);
        switch (scheme.kind) {
            case SchemeKind::block_ml:
            case SchemeKind::magic_syndrome: {
                const double ex = use_sphere_packing ? error_exponent_sphere(scheme.rate, p)
                                                     : error_exponent_random(scheme.rate, p);
                return ex > 0.0 ? a_bits / ex : inf;
            }
            case SchemeKind::viterbi:
            case SchemeKind::magic_sequential: {
                const double ec = conv_error_exponent(scheme.rate, p);
                return ec > 0.0 ? a_bits * scheme.rate / ec : inf;
            }
            default:
                return inf;
        }
    };
    const auto total_at = [&](double snr) {
        const double size = size_at(snr);
        if (!std::isfinite(size)) return inf;
        return snr + scheme_decode_power(scheme, size);
    };

    const double thr = min_snr_for_rate(scheme.rate, ChannelKind::bsc_from_bpsk_hard);
    const auto grid = detail::log_spaced(thr * (1.0 + 1e-9), thr * 1e3, 128);
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
        throw infeasible_error("optimize_scheme: no feasible transmit power in the search range");
    }
    double snr_star = grid[best];
    const std::size_t lo_i = best > 0 ? best - 1 : best;
    const std::size_t hi_i = best + 1 < grid.size() ? best + 1 : best;
    if (lo_i < hi_i) {
        const double arg = detail::golden_max(
            [&](double ls) { return -total_at(std::exp(ls)); },
            std::log(grid[lo_i]), std::log(grid[hi_i]), 64);
        if (total_at(std::exp(arg)) < best_val) snr_star = std::exp(arg);
    }
    const double size = size_at(snr_star);
    const double decode = scheme_decode_power(scheme, size);
    return OptimizedScheme{snr_star, size, std::ceil(size), decode, snr_star + decode, true};
}

/// First-order optimality residual for the magic schemes: at the optimum
/// the exponent E(snr) satisfies E = gamma_m * size * dE/dsnr with
/// gamma_m = energy * rate (sequential) or energy * (1-rate) * rate
/// (syndrome). Returns |E - gamma_m * size * E'| / E via a central
/// difference; small values certify the optimizer landed on the balance.
inline double magic_balance_residual(const ClassicalScheme& scheme, const OptimizedScheme& opt) {
    scheme.validate();
    double gamma_m;
    bool conv;
    switch (scheme.kind) {
        case SchemeKind::magic_sequential:
            gamma_m = scheme.energy_per_op * scheme.rate;
            conv = true;
            break;
        case SchemeKind::magic_syndrome:
            gamma_m = scheme.energy_per_op * (1.0 - scheme.rate) * scheme.rate;
            conv = false;
            break;
        default:
            throw std::invalid_argument("magic_balance_residual: only defined for magic schemes");
    }
    const auto ex = [&](double snr) {
        const double p = crossover_from_snr(snr);
        return conv ? conv_error_exponent(scheme.rate, p)
                    : error_exponent_random(scheme.rate, p);
    };
    const double h = 1e-6;
    const double e0 = ex(opt.snr);
    const double d = (ex(opt.snr * (1.0 + h)) - ex(opt.snr * (1.0 - h))) / (2.0 * h * opt.snr);
    return std::abs(e0 - gamma_m * opt.size * d) / e0;
}

}  // namespace waterslide
