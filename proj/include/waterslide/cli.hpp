#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "waterslide/asymptotics.hpp"
#include "waterslide/bounds.hpp"
#include "waterslide/channels.hpp"
#include "waterslide/classical.hpp"
#include "waterslide/errors.hpp"
#include "waterslide/optimizer.hpp"

// In-process core of the command-line tool. run() takes a fully resolved
// configuration and writes one CSV table to the csv stream and diagnostics
// to the diag stream. Exit codes: 0 all points computed, 1 configuration
// error, 2 at least one sweep point was infeasible and skipped (the
// remaining rows are still written).

namespace waterslide {

enum class Subcommand {
    waterfall,
    waterslide,
    classical,
    optimal_power,
    threshold,
    gapscan,
    boundscan,
};

struct RunConfig {
    Subcommand subcommand = Subcommand::waterslide;
    double rate = 1.0 / 3.0;
    ChannelKind kind = ChannelKind::bsc_from_bpsk_hard;
    BoundVariant variant = BoundVariant::combined;

    // decoder technology
    double gamma = 0.3;
    double alpha = 4.0;
    bool integer_iterations = false;

    // target-pe sweeps (waterfall, waterslide, classical); descending
    double pe_max = 1e-2;
    double pe_min = 1e-60;
    int points = 30;

    // classical schemes
    SchemeKind scheme = SchemeKind::viterbi;
    double energy_per_op = 0.3;
    bool use_sphere_packing = false;

    // gamma sweeps (optimal-power, threshold); ascending
    double gamma_min = 1e-3;
    double gamma_max = 10.0;
    bool adjusted_threshold = true;

    // gapscan
    double beta = 1.0;
    bool balanced = false;
    double gap_min = 1e-3;
    double gap_max = 1e-1;

    // operating point for gapscan/boundscan
    double base_p = 0.1;  // BSC crossover
    double base_snr = std::numeric_limits<double>::quiet_NaN();  // AWGN; NaN = derived default

    // boundscan
    double n_min = 1.0;
    double n_max = 1e9;
};

namespace detail {

inline void csv_row(std::ostream& os, std::initializer_list<double> vals) {
    char buf[64];
    bool first = true;
    for (const double v : vals) {
        if (!first) os << ',';
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
        first = false;
    }
    os << '\n';
}

inline double db_of(double linear) { return 10.0 * std::log10(linear); }

// Descending geometric grid from hi down to lo.
inline std::vector<double> descending_grid(double lo, double hi, int points) {
    auto g = log_spaced(lo, hi, static_cast<std::size_t>(points));
    std::vector<double> out(g.rbegin(), g.rend());
    return out;
}

// Default AWGN operating SNR for gap scans: capacity matched to the default
// BSC operating point (crossover 0.1).
inline double default_gapscan_snr() {
    const double cap = 1.0 - binary_entropy(0.1);
    return std::expm1(2.0 * cap * std::numbers::ln2);
}

inline void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

inline void validate_pe_sweep(const RunConfig& cfg) {
    require(cfg.points >= 2, "need at least 2 sweep points");
    require(cfg.pe_min > 0.0 && cfg.pe_min < cfg.pe_max && cfg.pe_max < 0.5,
            "pe sweep must satisfy 0 < pe_min < pe_max < 1/2");
}

inline int run_waterfall(const RunConfig& cfg, std::ostream& csv) {
    validate_pe_sweep(cfg);
    csv << "log10_pe,snr_linear,snr_db\n";
    for (const double pe : descending_grid(cfg.pe_min, cfg.pe_max, cfg.points)) {
        const double snr = shannon_waterfall_snr(cfg.rate, pe, cfg.kind);
        csv_row(csv, {std::log10(pe), snr, db_of(snr)});
    }
    return 0;
}

inline int run_waterslide(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    validate_pe_sweep(cfg);
    TechnologyWeights weights;
    weights.gamma = cfg.gamma;
    weights.alpha = cfg.alpha;
    weights.validate();
    const auto grid = descending_grid(cfg.pe_min, cfg.pe_max, cfg.points);
    const auto curve = waterslide_curve(cfg.rate, weights, grid, cfg.kind, cfg.variant);
    csv << "log10_pe,snr_linear,snr_db,n,iterations,decode_power_norm,total_norm,total_db\n";
    bool skipped = false;
    const double per_iter = cfg.gamma * std::log2(cfg.alpha);
    for (const auto& pt : curve) {
        if (!pt.feasible) {
            diag << "skipping pe=" << pt.target_pe << ": no feasible transmit power\n";
            skipped = true;
            continue;
        }
        double iters = pt.iterations;
        double decode = pt.decode_power_norm;
        double total = pt.total_norm;
        if (cfg.integer_iterations) {
            iters = std::ceil(iters);
            decode = per_iter * iters;
            total = pt.snr_transmit + decode;
        }
        csv_row(csv, {std::log10(pt.target_pe), pt.snr_transmit, db_of(pt.snr_transmit),
                      pt.n, iters, decode, total, db_of(total)});
    }
    return skipped ? 2 : 0;
}

inline int run_classical(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    validate_pe_sweep(cfg);
    const ClassicalScheme scheme{cfg.scheme, cfg.rate, cfg.energy_per_op};
    scheme.validate();
    csv << "log10_pe,snr_db,size,decode_power_norm,total_db\n";
    bool skipped = false;
    for (const double pe : descending_grid(cfg.pe_min, cfg.pe_max, cfg.points)) {
        try {
            const OptimizedScheme opt = optimize_scheme(scheme, pe, cfg.use_sphere_packing);
            csv_row(csv, {std::log10(pe), db_of(opt.snr), opt.size, opt.decode_power,
                          db_of(opt.total_power)});
        } catch (const infeasible_error& e) {
            diag << "skipping pe=" << pe << ": " << e.what() << '\n';
            skipped = true;
        }
    }
    return skipped ? 2 : 0;
}

inline int run_optimal_power(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    require(cfg.points >= 2, "need at least 2 sweep points");
    require(cfg.gamma_min > 0.0 && cfg.gamma_min < cfg.gamma_max,
            "gamma sweep must satisfy 0 < gamma_min < gamma_max");
    const double thr = min_snr_for_rate(cfg.rate, cfg.kind);
    csv << "gamma,snr_opt,excess_over_shannon\n";
    bool skipped = false;
    for (const double g : log_spaced(cfg.gamma_min, cfg.gamma_max,
                                     static_cast<std::size_t>(cfg.points))) {
        try {
            const double snr = asymptotic_transmit_snr(cfg.rate, g, cfg.kind);
            csv_row(csv, {g, snr, (snr - thr) / thr});
        } catch (const std::runtime_error& e) {
            diag << "skipping gamma=" << g << ": " << e.what() << '\n';
            skipped = true;
        }
    }
    return skipped ? 2 : 0;
}

inline int run_threshold(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    require(cfg.points >= 2, "need at least 2 sweep points");
    require(cfg.gamma_min > 0.0 && cfg.gamma_min < cfg.gamma_max,
            "gamma sweep must satisfy 0 < gamma_min < gamma_max");
    csv << "gamma,alpha,pe_threshold\n";
    bool skipped = false;
    for (const double g : log_spaced(cfg.gamma_min, cfg.gamma_max,
                                     static_cast<std::size_t>(cfg.points))) {
        const double pe =
            uncoded_coding_threshold(cfg.rate, g, cfg.alpha, cfg.kind, cfg.adjusted_threshold);
        if (std::isnan(pe)) {
            diag << "skipping gamma=" << g << ": no uncoded/coded crossing\n";
            skipped = true;
            continue;
        }
        csv_row(csv, {g, cfg.alpha, pe});
    }
    return skipped ? 2 : 0;
}

inline int run_gapscan(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    require(cfg.points >= 2, "need at least 2 sweep points");
    require(cfg.gap_min > 0.0 && cfg.gap_min < cfg.gap_max,
            "gap sweep must satisfy 0 < gap_min < gap_max");
    const ChannelPoint base =
        cfg.kind == ChannelKind::bsc_from_bpsk_hard
            ? ChannelPoint::bsc_from_crossover(cfg.base_p)
            : ChannelPoint::from_snr(ChannelKind::awgn, std::isnan(cfg.base_snr)
                                                            ? default_gapscan_snr()
                                                            : cfg.base_snr);
    const auto grid = log_spaced(cfg.gap_min, cfg.gap_max, static_cast<std::size_t>(cfg.points));
    const auto curve = n_vs_gap_curve(cfg.beta, cfg.balanced, base, grid, cfg.variant);
    csv << "gap,log2_gap,n,log2_n\n";
    bool skipped = false;
    for (const auto& pt : curve) {
        if (!pt.feasible || !std::isfinite(pt.n)) {
            diag << "skipping gap=" << pt.gap << ": bound infeasible at this gap\n";
            skipped = true;
            continue;
        }
        csv_row(csv, {pt.gap, std::log2(pt.gap), pt.n, std::log2(pt.n)});
    }
    return skipped ? 2 : 0;
}

inline int run_boundscan(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    require(cfg.points >= 2, "need at least 2 sweep points");
    require(cfg.n_min >= 1.0 && cfg.n_min < cfg.n_max,
            "n sweep must satisfy 1 <= n_min < n_max");
    constexpr double l10_2 = 0.30102999566398120;  // log10(2)
    csv << "n,log2_n,log2_pe,log10_pe,opt_param,delta\n";
    bool skipped = false;
    for (const double n : log_spaced(cfg.n_min, cfg.n_max, static_cast<std::size_t>(cfg.points))) {
        try {
            BoundResult res;
            double opt_param;
            if (cfg.kind == ChannelKind::bsc_from_bpsk_hard) {
                res = bsc_pe_lower(cfg.rate, cfg.base_p, n);
                if (cfg.variant == BoundVariant::combined) {
                    const double t = trivial_pe_lower(cfg.base_p, n);
                    if (t > res.log2_pe_bound) res.log2_pe_bound = t;
                }
                opt_param = res.opt_test_channel.g;
            } else {
                const double snr = std::isnan(cfg.base_snr) ? default_gapscan_snr() : cfg.base_snr;
                switch (cfg.variant) {
                    case BoundVariant::asymptotic:
                        res = awgn_pe_lower_asymptotic(cfg.rate, snr, n);
                        break;
                    case BoundVariant::numeric:
                        res = awgn_pe_lower_numeric(cfg.rate, snr, n);
                        break;
                    case BoundVariant::combined:
                        res = n <= 1e6 ? awgn_pe_lower_numeric(cfg.rate, snr, n)
                                       : awgn_pe_lower_asymptotic(cfg.rate, snr, n);
                        break;
                }
                opt_param = res.opt_test_channel.var_ratio;
            }
            csv_row(csv, {n, std::log2(n), res.log2_pe_bound, res.log2_pe_bound * l10_2,
                          opt_param, res.delta});
        } catch (const infeasible_error& e) {
            diag << "skipping n=" << n << ": " << e.what() << '\n';
            skipped = true;
        }
    }
    return skipped ? 2 : 0;
}

}  // namespace detail

/// Execute one subcommand. CSV goes to csv, human-readable diagnostics to
/// diag. Returns 0 on full success, 1 on a configuration error (reported to
/// diag), 2 when some sweep points were infeasible and skipped.
inline int run(const RunConfig& cfg, std::ostream& csv, std::ostream& diag) {
    try {
        switch (cfg.subcommand) {
            case Subcommand::waterfall:
                return detail::run_waterfall(cfg, csv);
            case Subcommand::waterslide:
                return detail::run_waterslide(cfg, csv, diag);
            case Subcommand::classical:
                return detail::run_classical(cfg, csv, diag);
            case Subcommand::optimal_power:
                return detail::run_optimal_power(cfg, csv, diag);
            case Subcommand::threshold:
                return detail::run_threshold(cfg, csv, diag);
            case Subcommand::gapscan:
                return detail::run_gapscan(cfg, csv, diag);
            case Subcommand::boundscan:
                return detail::run_boundscan(cfg, csv, diag);
        }
        diag << "error: unknown subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace waterslide
