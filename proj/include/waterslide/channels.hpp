#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "waterslide/numerics.hpp"

// Channel models parameterized by the transmit SNR (linear power ratio
// P_T / sigma_P^2): an AWGN channel used with soft decoding, and the binary
// symmetric channel obtained by hard-detecting BPSK over that same AWGN
// channel (crossover p = Q(sqrt(snr))). Test channels are the degraded
// counterparts over which converse bounds optimize: a BSC with crossover
// g >= p, or an AWGN channel whose noise variance is var_ratio >= 1 times
// the true one.

namespace waterslide {

enum class ChannelKind {
    bsc_from_bpsk_hard,
    awgn,
};

/// Crossover probability of hard-detected BPSK at a given linear SNR.
inline double crossover_from_snr(double snr) {
    if (!(snr >= 0.0)) {
        throw std::domain_error("crossover_from_snr: snr must be nonnegative");
    }
    return q_function(std::sqrt(snr));
}

/// An operating point: channel family plus linear transmit SNR.
struct ChannelPoint {
    ChannelKind kind;
    double snr;

    static ChannelPoint from_snr(ChannelKind kind, double snr) {
        if (!(snr >= 0.0)) {
            throw std::domain_error("ChannelPoint: snr must be nonnegative");
        }
        return ChannelPoint{kind, snr};
    }

    /// BSC point with the SNR chosen so the hard-decision crossover is p.
    static ChannelPoint bsc_from_crossover(double p) {
        if (!(p > 0.0 && p <= 0.5)) {
            throw std::domain_error("ChannelPoint: crossover must lie in (0, 1/2]");
        }
        const double x = q_function_inv(p);
        return ChannelPoint{ChannelKind::bsc_from_bpsk_hard, x * x};
    }

    /// Hard-decision crossover probability; only meaningful for the BSC kind.
    double crossover() const {
        if (kind != ChannelKind::bsc_from_bpsk_hard) {
            throw std::domain_error("ChannelPoint::crossover: only defined for the BSC kind");
        }
        return crossover_from_snr(snr);
    }
};

/// A degraded test channel: BSC with crossover g, or AWGN whose noise
/// variance is var_ratio times the true noise variance.
struct TestChannel {
    ChannelKind kind;
    double g = std::numeric_limits<double>::quiet_NaN();
    double var_ratio = std::numeric_limits<double>::quiet_NaN();

    static TestChannel bsc(double g) {
        if (!(g > 0.0 && g <= 0.5)) {
            throw std::domain_error("TestChannel: crossover must lie in (0, 1/2]");
        }
        TestChannel t;
        t.kind = ChannelKind::bsc_from_bpsk_hard;
        t.g = g;
        return t;
    }

    static TestChannel awgn(double var_ratio) {
        if (!(var_ratio >= 1.0)) {
            throw std::domain_error("TestChannel: variance ratio must be >= 1");
        }
        TestChannel t;
        t.kind = ChannelKind::awgn;
        t.var_ratio = var_ratio;
        return t;
    }
};

/// Capacity of the operating channel, in bits per channel use.
inline double capacity(const ChannelPoint& ch) {
    constexpr double ln2 = std::numbers::ln2;
    switch (ch.kind) {
        case ChannelKind::bsc_from_bpsk_hard:
            return 1.0 - binary_entropy(crossover_from_snr(ch.snr));
        case ChannelKind::awgn:
            if (!(ch.snr >= 0.0)) {
                throw std::domain_error("capacity: snr must be nonnegative");
            }
            return 0.5 * std::log1p(ch.snr) / ln2;
    }
    throw std::invalid_argument("capacity: unknown channel kind");
}

/// Capacity of a test channel, in bits per channel use. The AWGN test
/// channel needs the operating SNR: C = (1/2) log2(1 + snr / var_ratio).
inline double capacity(const TestChannel& tc,
                       double snr = std::numeric_limits<double>::quiet_NaN()) {
    constexpr double ln2 = std::numbers::ln2;
    switch (tc.kind) {
        case ChannelKind::bsc_from_bpsk_hard:
            return 1.0 - binary_entropy(tc.g);
        case ChannelKind::awgn:
            if (!(snr >= 0.0)) {
                throw std::domain_error("capacity: AWGN test channel needs the operating snr");
            }
            return 0.5 * std::log1p(snr / tc.var_ratio) / ln2;
    }
    throw std::invalid_argument("capacity: unknown channel kind");
}

/// Smallest linear SNR at which the channel family supports the given rate.
/// BSC: rate < 1 required, snr = Q^{-1}(h_b^{-1}(1 - rate))^2.
/// AWGN: snr = 2^{2 rate} - 1.
inline double min_snr_for_rate(double rate, ChannelKind kind) {
    constexpr double ln2 = std::numbers::ln2;
    switch (kind) {
        case ChannelKind::bsc_from_bpsk_hard: {
            if (!(rate > 0.0 && rate < 1.0)) {
                throw std::domain_error("min_snr_for_rate: BSC rate must lie in (0, 1)");
            }
            const double p = binary_entropy_inv(1.0 - rate);
            const double x = q_function_inv(p);
            return x * x;
        }
        case ChannelKind::awgn:
            if (!(rate > 0.0)) {
                throw std::domain_error("min_snr_for_rate: rate must be positive");
            }
            return std::expm1(2.0 * rate * ln2);
    }
    throw std::invalid_argument("min_snr_for_rate: unknown channel kind");
}

/// Waterfall curve of an ideal capacity-achieving system: the smallest SNR
/// at which rate * (1 - h_b(pe)) bits of effective rate fit under capacity.
/// Returns 0 when the effective rate is nonpositive.
inline double shannon_waterfall_snr(double rate, double pe, ChannelKind kind) {
    if (!(pe >= 0.0 && pe <= 0.5)) {
        throw std::domain_error("shannon_waterfall_snr: pe must lie in [0, 1/2]");
    }
    if (!(rate > 0.0)) {
        throw std::domain_error("shannon_waterfall_snr: rate must be positive");
    }
    const double eff = rate * (1.0 - binary_entropy(pe));
    if (!(eff > 0.0)) return 0.0;
    if (kind == ChannelKind::bsc_from_bpsk_hard && eff >= 1.0) {
        throw std::domain_error("shannon_waterfall_snr: effective BSC rate must stay below 1");
    }
    return min_snr_for_rate(eff, kind);
}

}  // namespace waterslide
