#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "waterslide/channels.hpp"
#include "waterslide/errors.hpp"
#include "waterslide/numerics.hpp"

// Finite-blocklength converse bounds for iterative decoders whose output bits
// each depend on a decoding neighborhood of n channel observations. The core
// object is a lower bound on the achievable bit error probability Pe as a
// function of n, obtained by optimizing over degraded test channels; from it
// follow the minimum neighborhood size needed to hit a target Pe, matching
// iteration-count bounds for decoders whose neighborhood grows by a factor
// alpha per iteration, and an achievability-side neighborhood upper bound.
// All Pe values are carried as log2(Pe).

namespace waterslide {

enum class BoundVariant {
    asymptotic,
    numeric,
    combined,
};

/// Result of a neighborhood-size lower bound evaluation at one (n, channel).
struct BoundResult {
    double n;
    double log2_pe_bound;
    TestChannel opt_test_channel;
    double delta;  // fraction of rate lost on the optimizing test channel
};

/// Lower and upper bounds on the number of iterations needed to reach
/// neighborhood size n when the neighborhood grows at most alpha-fold per
/// iteration: log_alpha(n) <= l <= 2 log_alpha(n) + 2.
struct IterationBounds {
    double l_lower;
    double l_upper;
    double alpha;
};

inline IterationBounds iteration_bounds(double n, double alpha) {
    if (!(n >= 1.0)) {
        throw std::domain_error("iteration_bounds: n must be >= 1");
    }
    if (!(alpha > 1.0)) {
        throw std::domain_error("iteration_bounds: alpha must exceed 1");
    }
    const double l = std::log2(n) / std::log2(alpha);
    return IterationBounds{l, 2.0 * l + 2.0, alpha};
}

/// The finite-n Gaussian converse uses a typicality radius eps(n, y) solving
/// (1 + eps) e^{-eps} = (y/2)^{2/n}. Two printed forms of the derived
/// parameter T(n) are in circulation: the appendix form keeps the "-1" from
/// the Lambert-W inversion (the default here), the theorem-statement form
/// omits it. The compatibility switch reproduces the latter.
enum class TParameterForm {
    appendix,
    theorem_statement,
};

/// phi(n, y) = n * eps(n, y) where eps solves (1+eps) e^{-eps} = (y/2)^{2/n},
/// i.e. eps - log(1+eps) = (2/n) log(2/y). Requires y in (0, 2]; phi(n, 2) = 0.
inline double phi_exponent(double n, double y) {
    if (!(n >= 1.0)) {
        throw std::domain_error("phi_exponent: n must be >= 1");
    }
    if (!(y > 0.0 && y <= 2.0)) {
        throw std::domain_error("phi_exponent: y must lie in (0, 2]");
    }
    const double s = (2.0 / n) * std::log(2.0 / y);
    return n * detail::solve_v_minus_log1p(s);
}

/// T(n) = eps(n, 1): the typicality radius at y = 1. Appendix form by
/// default; the theorem-statement form adds 1.
inline double t_parameter(double n, TParameterForm form = TParameterForm::appendix) {
    if (!(n >= 1.0)) {
        throw std::domain_error("t_parameter: n must be >= 1");
    }
    const double eps = detail::solve_v_minus_log1p(2.0 * std::numbers::ln2 / n);
    return form == TParameterForm::appendix ? eps : eps + 1.0;
}

/// mu(n) = (1 + 1/(T+1) + (4T+2)/(n T (T+1))) / 2, the variance-ratio
/// threshold above which the finite-n Gaussian map f_L is convex. Uses the
/// same T form as t_parameter. mu(n) < 1 once n is a few hundred.
inline double mu_parameter(double n, TParameterForm form = TParameterForm::appendix) {
    const double t = t_parameter(n, form);
    return 0.5 * (1.0 + 1.0 / (t + 1.0) + (4.0 * t + 2.0) / (n * t * (t + 1.0)));
}

/// Chernoff bound on the upper deviation of an average of n Bernoulli(g)
/// variables: P(mean >= g + eps) <= 2^{-n K(g) eps^2}. This returns the
/// single-observation exponent base, 2^{-K(g) eps^2}.
inline double chernoff_bsc_tail(double g, double eps) {
    if (!(eps > 0.0)) {
        throw std::domain_error("chernoff_bsc_tail: eps must be positive");
    }
    return std::exp2(-chernoff_k(g) * eps * eps);
}

/// Tail bounds for the normalized chi-square deviation of n Gaussian noise
/// samples: P(sum Z_i^2 >= n sigma^2 (1 + eps_norm)). The multiplicative
/// form ((1+eps) e^{-eps})^{n/2} always holds; the simpler affine form
/// exp(-sqrt(n) eps / 4) requires eps_norm >= 3 / sqrt(n).
struct ChernoffAwgnTail {
    double multiplicative;
    double affine;
    bool affine_valid;
};

inline ChernoffAwgnTail chernoff_awgn_tail(double n, double eps_norm) {
    if (!(n >= 1.0)) {
        throw std::domain_error("chernoff_awgn_tail: n must be >= 1");
    }
    if (!(eps_norm > 0.0)) {
        throw std::domain_error("chernoff_awgn_tail: eps_norm must be positive");
    }
    ChernoffAwgnTail out;
    out.multiplicative = std::exp(-0.5 * n * detail::x_minus_log1p(eps_norm));
    out.affine = std::exp(-0.25 * std::sqrt(n) * eps_norm);
    out.affine_valid = eps_norm >= 3.0 / std::sqrt(n);
    return out;
}

/// Single-test-channel BSC converse evaluated at crossover g: the log2 of
///   (h_b^{-1}(delta)/2) * 2^{-n D(g||p)} * (p(1-g)/(g(1-p)))^{eps sqrt(n)},
/// where delta = 1 - C(g)/rate and eps = sqrt(log2(2/h_b^{-1}(delta))/K(g)).
/// Returns -inf when C(g) >= rate (the test channel carries the code rate).
inline double bsc_pe_lower_at(double g, double rate, double p, double n) {
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("bsc_pe_lower_at: crossover must lie in (0, 1/2]");
    }
    if (!(g > 0.0 && g <= 0.5)) {
        throw std::domain_error("bsc_pe_lower_at: test crossover must lie in (0, 1/2]");
    }
    if (!(rate > 0.0 && rate < 1.0)) {
        throw std::domain_error("bsc_pe_lower_at: rate must lie in (0, 1)");
    }
    if (!(n >= 0.0)) {
        throw std::domain_error("bsc_pe_lower_at: n must be nonnegative");
    }
    const double delta = 1.0 - (1.0 - binary_entropy(g)) / rate;
    if (!(delta > 0.0)) return -std::numeric_limits<double>::infinity();
    const double x = binary_entropy_inv(delta);
    const double eps = std::sqrt((1.0 - std::log2(x)) / chernoff_k(g));
    const double logfrac = std::log2(g * (1.0 - p) / (p * (1.0 - g)));
    return std::log2(0.5 * x) - n * kl_bernoulli(g, p) - eps * std::sqrt(n) * logfrac;
}

/// The converse's per-bit map for the BSC: f(x) = (x/2) 2^{-n D(g||p)}
/// (p(1-g)/(g(1-p)))^{eps(x) sqrt(n)} with eps(x) = sqrt(log2(2/x)/K(g)).
/// Convex and increasing in x on (0, 1] when p < g.
inline double bsc_mapping_f(double x, double g, double p, double n) {
    if (!(x > 0.0 && x <= 1.0)) {
        throw std::domain_error("bsc_mapping_f: x must lie in (0, 1]");
    }
    if (!(p > 0.0 && p < g && g < 0.5)) {
        throw std::domain_error("bsc_mapping_f: need 0 < p < g < 1/2");
    }
    if (!(n >= 0.0)) {
        throw std::domain_error("bsc_mapping_f: n must be nonnegative");
    }
    const double eps = std::sqrt((1.0 - std::log2(x)) / chernoff_k(g));
    const double logfrac = std::log2(g * (1.0 - p) / (p * (1.0 - g)));
    const double e = std::log2(0.5 * x) - n * kl_bernoulli(g, p) - eps * std::sqrt(n) * logfrac;
    return std::exp2(e);
}

/// Asymptotic-form Gaussian per-bit map: f(delta) = (delta/2) *
/// exp(-n D - sqrt(n) (3/2 + 2 ln(2/delta)) (vr - 1)) with
/// D = (vr - 1 - ln vr)/2 nats. Convex and increasing on (0, 1] for vr >= 1.
inline double awgn_mapping_f(double delta, double var_ratio, double n) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::domain_error("awgn_mapping_f: delta must lie in (0, 1]");
    }
    if (!(var_ratio >= 1.0)) {
        throw std::domain_error("awgn_mapping_f: variance ratio must be >= 1");
    }
    if (!(n >= 0.0)) {
        throw std::domain_error("awgn_mapping_f: n must be nonnegative");
    }
    const double vrm1 = var_ratio - 1.0;
    const double d = 0.5 * detail::x_minus_log1p(vrm1);
    const double e = std::log(0.5 * delta) - n * d -
                     std::sqrt(n) * (1.5 + 2.0 * std::log(2.0 / delta)) * vrm1;
    return std::exp(e);
}

/// Finite-n Gaussian per-bit map: f_L(delta) = (delta/2) *
/// exp(-n D - phi(n, delta) (vr - 1) / 2). Dominates awgn_mapping_f
/// pointwise and is convex for vr > mu(n).
inline double awgn_mapping_f_l(double delta, double var_ratio, double n) {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::domain_error("awgn_mapping_f_l: delta must lie in (0, 1]");
    }
    if (!(n >= 1.0)) {
        throw std::domain_error("awgn_mapping_f_l: n must be >= 1");
    }
    if (!(var_ratio > mu_parameter(n))) {
        throw std::domain_error("awgn_mapping_f_l: variance ratio must exceed mu(n)");
    }
    const double vrm1 = var_ratio - 1.0;
    const double d = 0.5 * detail::x_minus_log1p(vrm1);
    const double e = std::log(0.5 * delta) - n * d - 0.5 * phi_exponent(n, delta) * vrm1;
    return std::exp(e);
}

/// Rate-loss floor: a code of the given rate forced through a test channel
/// of capacity test_capacity < rate suffers bit error probability at least
/// h_b^{-1}(1 - test_capacity / rate). Zero when the test channel still
/// carries the rate.
inline double pe_floor_over_channel(double rate, double test_capacity) {
    if (!(rate > 0.0)) {
        throw std::domain_error("pe_floor_over_channel: rate must be positive");
    }
    if (!(test_capacity >= 0.0)) {
        throw std::domain_error("pe_floor_over_channel: test capacity must be nonnegative");
    }
    double delta = 1.0 - test_capacity / rate;
    if (!(delta > 0.0)) return 0.0;
    if (delta > 1.0) delta = 1.0;
    return binary_entropy_inv(delta);
}

/// Channel-coding-free floor: any scheme, Pe >= p^n, i.e. log2 Pe >= n log2 p.
inline double trivial_pe_lower(double p, double n) {
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("trivial_pe_lower: crossover must lie in (0, 1/2]");
    }
    if (!(n >= 0.0)) {
        throw std::domain_error("trivial_pe_lower: n must be nonnegative");
    }
    return n * std::log2(p);
}

namespace detail {

// Precomputed per-rate test-channel grid for the BSC converse sup. The grid
// parameterizes g = g_min + off with off geometric over twelve decades, so
// the sup is resolved both in the n -> infinity regime (argmax hugging
// g_min) and at small n (argmax near 1/2). Quantities that depend only on
// (rate, g) are cached; eval() then costs one KL per node.
struct BscSupNode {
    double off;
    double log_off;
    double g;
    double lh;   // log2(h_b^{-1}(delta)/2)
    double eps;  // sqrt(log2(2/h_b^{-1}(delta)) / K(g))
    double lg;   // log2(g/(1-g))
    bool valid;  // delta bounded away from 0
};

struct BscSupContext {
    double rate;
    double g_min;
    std::vector<BscSupNode> nodes;
    std::size_t first_valid;

    explicit BscSupContext(double rate_in) : rate(rate_in) {
        g_min = binary_entropy_inv(1.0 - rate);
        const double span = 0.5 - g_min;
        const auto offs = log_spaced(span * 1e-12, span, 512);
        nodes.reserve(offs.size());
        first_valid = offs.size();
        for (const double off : offs) {
            BscSupNode nd;
            nd.off = off;
            nd.log_off = std::log(off);
            nd.g = g_min + off;
            if (nd.g > 0.5) nd.g = 0.5;
            const double delta = 1.0 - (1.0 - binary_entropy(nd.g)) / rate;
            nd.valid = delta >= 1e-15;
            if (nd.valid) {
                const double x = binary_entropy_inv(delta);
                nd.lh = std::log2(0.5 * x);
                nd.eps = std::sqrt((1.0 - std::log2(x)) / chernoff_k(nd.g));
                nd.lg = std::log2(nd.g / (1.0 - nd.g));
                if (first_valid == offs.size()) first_valid = nodes.size();
            } else {
                nd.lh = -std::numeric_limits<double>::infinity();
                nd.eps = 0.0;
                nd.lg = 0.0;
            }
            nodes.push_back(nd);
        }
    }

    BoundResult eval(double p, double n) const {
        const double lp = std::log2((1.0 - p) / p);
        const double sqn = std::sqrt(n);
        double best_val = -std::numeric_limits<double>::infinity();
        std::size_t best = nodes.size() - 1;
        for (std::size_t i = first_valid; i < nodes.size(); ++i) {
            const BscSupNode& nd = nodes[i];
            const double v = nd.lh - n * kl_bernoulli(nd.g, p) - nd.eps * sqn * (nd.lg + lp);
            if (v > best_val) {
                best_val = v;
                best = i;
            }
        }
        double g_star = nodes[best].g;
        double val = best_val;

        // Refine between the neighbors of the best node. lh and eps vary
        // slowly and are interpolated linearly in log(off); the divergence
        // and the likelihood-ratio slope are evaluated exactly.
        const std::size_t lo_i = best > first_valid ? best - 1 : best;
        const std::size_t hi_i = best + 1 < nodes.size() ? best + 1 : best;
        if (lo_i < hi_i) {
            const auto interp_obj = [&](double lo) {
                std::size_t a = lo <= nodes[best].log_off ? lo_i : best;
                if (a == hi_i) a = hi_i - 1;
                const std::size_t b = a + 1;
                const double t = (lo - nodes[a].log_off) / (nodes[b].log_off - nodes[a].log_off);
                const double lh = nodes[a].lh + t * (nodes[b].lh - nodes[a].lh);
                const double eps = nodes[a].eps + t * (nodes[b].eps - nodes[a].eps);
                double g = g_min + std::exp(lo);
                if (g > 0.5) g = 0.5;
                const double lg = std::log2(g / (1.0 - g));
                return lh - n * kl_bernoulli(g, p) - eps * sqn * (lg + lp);
            };
            const double arg = golden_max(interp_obj, nodes[lo_i].log_off, nodes[hi_i].log_off, 64);
            const double refined = interp_obj(arg);
            if (refined > val) {
                val = refined;
                g_star = g_min + std::exp(arg);
                if (g_star > 0.5) g_star = 0.5;
            }
        }
        const double delta_star = 1.0 - (1.0 - binary_entropy(g_star)) / rate;
        return BoundResult{n, val, TestChannel::bsc(g_star), delta_star};
    }
};

inline const BscSupContext& bsc_sup_context(double rate) {
    static std::mutex mutex;
    static std::map<std::uint64_t, std::unique_ptr<BscSupContext>> cache;
    const std::uint64_t key = std::bit_cast<std::uint64_t>(rate);
    const std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<BscSupContext>(rate)).first;
    }
    return *it->second;
}

// Shared delta grid for the Gaussian converse sup, with h_b^{-1} cached per
// node. Channel- and n-dependent factors are cheap, so one process-wide grid
// serves every (rate, snr, n).
struct AwgnDeltaNode {
    double delta;
    double log_delta;
    double lh;  // ln(h_b^{-1}(delta)/2)
    double l2;  // ln(2/h_b^{-1}(delta))
};

inline const std::vector<AwgnDeltaNode>& awgn_delta_grid() {
    static const std::vector<AwgnDeltaNode> grid = [] {
        std::vector<AwgnDeltaNode> g;
        const auto deltas = log_spaced(1e-12, 0.99, 512);
        g.reserve(deltas.size());
        for (const double d : deltas) {
            const double x = binary_entropy_inv(d);
            g.push_back(AwgnDeltaNode{d, std::log(d), std::log(0.5 * x), std::log(2.0 / x)});
        }
        return g;
    }();
    return grid;
}

// Gaussian converse sup over test noise variances, parameterized by delta
// (the rate deficit of the test channel). Numeric selects the finite-n form
// with its vr > mu(n) feasibility floor; otherwise the asymptotic form with
// vr > 1. Throws infeasible_error when no grid point is feasible.
template <bool Numeric>
BoundResult awgn_sup(double rate, double snr, double n) {
    constexpr double ln2 = std::numbers::ln2;
    const auto& grid = awgn_delta_grid();
    const double mu = Numeric ? mu_parameter(n) : 0.0;
    const double sqn = std::sqrt(n);

    // vr - 1 for the test channel whose capacity is rate * (1 - delta).
    const auto vr_minus_1 = [&](double delta) {
        const double em = std::expm1(2.0 * rate * (1.0 - delta) * ln2);
        return (snr - em) / em;
    };
    const auto feasible = [&](double vrm1) {
        if (!(vrm1 > 1e-12)) return false;
        if (Numeric && !(1.0 + vrm1 > mu * (1.0 + 1e-12))) return false;
        return true;
    };
    const auto exponent = [&](double vrm1, double lh, double l2) {
        const double d = 0.5 * x_minus_log1p(vrm1);
        if (Numeric) {
            const double v = solve_v_minus_log1p((2.0 / n) * l2);
            return lh - n * d - 0.5 * n * v * vrm1;
        }
        return lh - n * d - sqn * (1.5 + 2.0 * l2) * vrm1;
    };

    double best_val = -std::numeric_limits<double>::infinity();
    std::size_t best = grid.size();
    std::size_t first_ok = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double vrm1 = vr_minus_1(grid[i].delta);
        if (!feasible(vrm1)) continue;
        if (first_ok == grid.size()) first_ok = i;
        const double v = exponent(vrm1, grid[i].lh, grid[i].l2);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    if (best == grid.size()) {
        throw infeasible_error(
            "awgn converse: no feasible test channel (snr too small for the rate at this n)");
    }

    double delta_star = grid[best].delta;
    double val = best_val;
    const std::size_t lo_i = best > first_ok ? best - 1 : best;
    const std::size_t hi_i = best + 1 < grid.size() ? best + 1 : best;
    if (lo_i < hi_i) {
        const auto interp_obj = [&](double ld) {
            std::size_t a = ld <= grid[best].log_delta ? lo_i : best;
            if (a == hi_i) a = hi_i - 1;
            const std::size_t b = a + 1;
            const double t = (ld - grid[a].log_delta) / (grid[b].log_delta - grid[a].log_delta);
            const double lh = grid[a].lh + t * (grid[b].lh - grid[a].lh);
            const double l2 = grid[a].l2 + t * (grid[b].l2 - grid[a].l2);
            const double vrm1 = vr_minus_1(std::exp(ld));
            if (!feasible(vrm1)) return -std::numeric_limits<double>::infinity();
            return exponent(vrm1, lh, l2);
        };
        const double arg = golden_max(interp_obj, grid[lo_i].log_delta, grid[hi_i].log_delta, 64);
        const double refined = interp_obj(arg);
        if (refined > val) {
            val = refined;
            delta_star = std::exp(arg);
        }
    }
    const double vr_star = 1.0 + vr_minus_1(delta_star);
    return BoundResult{n, val / ln2, TestChannel::awgn(vr_star), delta_star};
}

}  // namespace detail

/// BSC converse: sup over test crossovers g with C(g) < rate of the
/// single-channel bound, returned as log2(Pe lower bound) plus the
/// optimizing test channel. Contexts are cached per rate.
inline BoundResult bsc_pe_lower(double rate, double p, double n) {
    if (!(p > 0.0 && p <= 0.5)) {
        throw std::domain_error("bsc_pe_lower: crossover must lie in (0, 1/2]");
    }
    if (!(rate > 0.0 && rate < 1.0)) {
        throw std::domain_error("bsc_pe_lower: rate must lie in (0, 1)");
    }
    if (!(n >= 0.0)) {
        throw std::domain_error("bsc_pe_lower: n must be nonnegative");
    }
    return detail::bsc_sup_context(rate).eval(p, n);
}

/// Gaussian converse, asymptotic form: sup over test noise variances with
/// C(G) < rate of (h_b^{-1}(delta)/2) exp(-n D - sqrt(n)(3/2 + 2 ln(2/
/// h_b^{-1}(delta)))(vr-1)), as log2.
inline BoundResult awgn_pe_lower_asymptotic(double rate, double snr, double n) {
    if (!(rate > 0.0) || !(snr > 0.0)) {
        throw std::domain_error("awgn_pe_lower_asymptotic: rate and snr must be positive");
    }
    if (!(n >= 1.0)) {
        throw std::domain_error("awgn_pe_lower_asymptotic: n must be >= 1");
    }
    return detail::awgn_sup<false>(rate, snr, n);
}

/// Gaussian converse, finite-n form: same sup with the exact typicality
/// exponent phi(n, delta)/2 and feasibility floor vr > mu(n). Dominates the
/// asymptotic form pointwise. Throws infeasible_error if no test channel is
/// feasible.
inline BoundResult awgn_pe_lower_numeric(double rate, double snr, double n) {
    if (!(rate > 0.0) || !(snr > 0.0)) {
        throw std::domain_error("awgn_pe_lower_numeric: rate and snr must be positive");
    }
    if (!(n >= 1.0)) {
        throw std::domain_error("awgn_pe_lower_numeric: n must be >= 1");
    }
    return detail::awgn_sup<true>(rate, snr, n);
}

namespace detail {

// log2 Pe lower bound for min_neighborhood's bisection: the tightest
// variant-selected bound at neighborhood size n. AWGN "combined" uses the
// finite-n form where it is strongest (moderate n) and the asymptotic form
// beyond; an empty finite-n feasible set acts as an unsatisfiable bound so
// the bisection moves toward larger n.
inline double variant_bound_log2(double rate, const ChannelPoint& ch, double n,
                                 BoundVariant variant) {
    if (ch.kind == ChannelKind::bsc_from_bpsk_hard) {
        const double p = crossover_from_snr(ch.snr);
        double b = bsc_sup_context(rate).eval(p, n).log2_pe_bound;
        if (variant == BoundVariant::combined) {
            const double t = trivial_pe_lower(p, n);
            if (t > b) b = t;
        }
        return b;
    }
    try {
        switch (variant) {
            case BoundVariant::asymptotic:
                return awgn_sup<false>(rate, ch.snr, n).log2_pe_bound;
            case BoundVariant::numeric:
                return awgn_sup<true>(rate, ch.snr, n).log2_pe_bound;
            case BoundVariant::combined:
                return n <= 1e6 ? awgn_sup<true>(rate, ch.snr, n).log2_pe_bound
                                : awgn_sup<false>(rate, ch.snr, n).log2_pe_bound;
        }
    } catch (const infeasible_error&) {
        return 0.0;
    }
    throw std::invalid_argument("variant_bound_log2: unknown bound variant");
}

}  // namespace detail

/// Smallest neighborhood size n (real-valued) at which the converse permits
/// Pe <= target_pe, found by bisection on log2(n) up to n = 1e15. Returns
/// +inf when the channel is at or below the capacity threshold for the rate
/// or when even n = 1e15 cannot reach the target.
inline double min_neighborhood(double rate, const ChannelPoint& ch, double target_pe,
                               BoundVariant variant = BoundVariant::combined) {
    if (!(target_pe > 0.0 && target_pe < 0.5)) {
        throw std::domain_error("min_neighborhood: target_pe must lie in (0, 1/2)");
    }
    if (!(rate > 0.0)) {
        throw std::domain_error("min_neighborhood: rate must be positive");
    }
    if (ch.kind == ChannelKind::bsc_from_bpsk_hard && !(rate < 1.0)) {
        throw std::domain_error("min_neighborhood: BSC rate must lie in (0, 1)");
    }
    const double inf = std::numeric_limits<double>::infinity();
    // At or below the capacity threshold no blocklength reaches any target:
    // the converse is not monotone in n there, so bail out before bisecting.
    if (capacity(ch) <= rate) return inf;
    const double lt = std::log2(target_pe);
    const auto bound = [&](double u) {
        return detail::variant_bound_log2(rate, ch, std::exp2(u), variant);
    };
    if (bound(0.0) <= lt) return 1.0;
    double u_lo = 0.0;
    double u_hi = std::log2(1e15);
    if (bound(u_hi) > lt) return inf;
    for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (u_lo + u_hi);
        if (bound(mid) > lt) {
            u_lo = mid;
        } else {
            u_hi = mid;
        }
    }
    return std::exp2(u_hi);
}

/// Achievability-side neighborhood upper bound: with a random code of rate
/// R decoded within its neighborhood, Pe <= 2^{-n E_r(R, p)}, so
/// n = log2(1/target_pe) / E_r suffices. BSC-backed channels only.
inline double upper_bound_neighborhood(double rate, const ChannelPoint& ch, double target_pe) {
    if (ch.kind != ChannelKind::bsc_from_bpsk_hard) {
        throw std::invalid_argument(
            "upper_bound_neighborhood: only defined for BSC-backed channel points");
    }
    if (!(target_pe > 0.0 && target_pe <= 1.0)) {
        throw std::domain_error("upper_bound_neighborhood: target_pe must lie in (0, 1]");
    }
    const double p = crossover_from_snr(ch.snr);
    const double er = error_exponent_random(rate, p);
    if (!(er > 0.0)) {
        throw std::domain_error("upper_bound_neighborhood: rate at or above channel capacity");
    }
    return -std::log2(target_pe) / er;
}

}  // namespace waterslide
