#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "waterslide/optimizer.hpp"

using namespace waterslide;

TEST_CASE("technology weights from raw constants") {
    RawTechnology raw;
    raw.xi_t = std::pow(10.0, 8.6);
    raw.xi_d = 1.0;
    raw.e_node = 1e-12;
    raw.sigma_p2 = 4e-21;
    const auto w = TechnologyWeights::from_raw(raw, 4.0);
    CHECK(w.gamma == Catch::Approx(0.314).margin(5e-4));
    CHECK(w.alpha == 4.0);
    CHECK_NOTHROW(w.validate());

    TechnologyWeights bad = w;
    bad.gamma = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    TechnologyWeights neg;
    neg.gamma = 0.0;
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
    TechnologyWeights flat;
    flat.alpha = 1.0;
    CHECK_THROWS_AS(flat.validate(), std::invalid_argument);
}

TEST_CASE("divergence at the capacity matching channel") {
    for (ChannelKind k : {ChannelKind::bsc_from_bpsk_hard, ChannelKind::awgn}) {
        const double thr = min_snr_for_rate(1.0 / 3.0, k);
        CHECK(divergence_at_capacity(1.0 / 3.0, thr, k) <= 1e-12);
        double prev = 0.0;
        for (double m : {1.1, 1.5, 2.0, 4.0, 10.0}) {
            const double d = divergence_at_capacity(1.0 / 3.0, m * thr, k);
            CHECK(d > prev);
            prev = d;
        }
    }
    // closed forms
    const double snr = 2.0;
    const double d_bsc = divergence_at_capacity(1.0 / 3.0, snr, ChannelKind::bsc_from_bpsk_hard);
    CHECK(d_bsc == Catch::Approx(kl_bernoulli(binary_entropy_inv(2.0 / 3.0),
                                              crossover_from_snr(snr))).margin(1e-14));
    const double s_min = std::expm1((2.0 / 3.0) * std::numbers::ln2);
    const double d_awgn = divergence_at_capacity(1.0 / 3.0, snr, ChannelKind::awgn);
    CHECK(d_awgn == Catch::Approx(kl_gaussian_var(snr / s_min, 1.0)).margin(1e-14));
}

TEST_CASE("asymptotic transmit snr") {
    const double rate = 1.0 / 3.0;
    const double thr = min_snr_for_rate(rate, ChannelKind::bsc_from_bpsk_hard);

    // tiny gamma recovers the Shannon threshold
    const double z0 = asymptotic_transmit_snr(rate, 1e-8, ChannelKind::bsc_from_bpsk_hard);
    CHECK(z0 == Catch::Approx(0.881085).epsilon(1e-3));
    CHECK(z0 >= thr);

    // the returned point satisfies the balance equation
    for (ChannelKind k : {ChannelKind::bsc_from_bpsk_hard, ChannelKind::awgn}) {
        for (double gamma : {0.01, 0.3, 3.0}) {
            const double z = asymptotic_transmit_snr(rate, gamma, k);
            const double h = 1e-6;
            const auto f = [&](double s) { return divergence_at_capacity(rate, s, k); };
            const double fp = (f(z * (1.0 + h)) - f(z * (1.0 - h))) / (2.0 * h * z);
            CHECK(std::abs(f(z) - gamma * fp) <= 1e-5 * gamma * fp);
        }
    }

    // strictly increasing in gamma, frozen midpoint
    double prev = 0.0;
    for (double gamma : {1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0}) {
        const double z = asymptotic_transmit_snr(rate, gamma, ChannelKind::bsc_from_bpsk_hard);
        CHECK(z > prev);
        prev = z;
    }
    CHECK(asymptotic_transmit_snr(rate, 0.3, ChannelKind::bsc_from_bpsk_hard) ==
          Catch::Approx(1.4072).margin(2e-3));

    // near threshold the excess is 2 gamma to first order
    const double g_small = 1e-4;
    const double z = asymptotic_transmit_snr(rate, g_small, ChannelKind::bsc_from_bpsk_hard);
    CHECK((z - thr) / (2.0 * g_small) == Catch::Approx(1.0).margin(0.05));

    CHECK_THROWS_AS(asymptotic_transmit_snr(rate, 0.0, ChannelKind::awgn), std::domain_error);
}

TEST_CASE("total power lower bound point") {
    TechnologyWeights w;
    w.gamma = 0.3;
    w.alpha = 4.0;
    const double rate = 1.0 / 3.0;
    const auto pt = total_power_lower(rate, w, 1e-20, ChannelKind::bsc_from_bpsk_hard);
    CHECK(pt.feasible);
    CHECK(pt.total_norm == Catch::Approx(4.3413).margin(5e-3));

    // internal consistency
    CHECK(pt.total_norm ==
          Catch::Approx(pt.snr_transmit + pt.decode_power_norm).margin(1e-12));
    CHECK(pt.decode_power_norm == Catch::Approx(w.gamma * std::log2(pt.n)).margin(1e-12));
    CHECK(pt.iterations == Catch::Approx(std::log2(pt.n) / 2.0).margin(1e-12));
    const double n_check = min_neighborhood(
        rate, ChannelPoint{ChannelKind::bsc_from_bpsk_hard, pt.snr_transmit}, 1e-20);
    CHECK(pt.n == Catch::Approx(n_check).epsilon(1e-9));

    // above the zero-error floor
    CHECK(pt.total_norm > min_snr_for_rate(rate, ChannelKind::bsc_from_bpsk_hard));

    // optimality: perturbing the snr does not beat the optimum
    for (double m : {0.7, 0.9, 1.1, 1.5}) {
        const double s = pt.snr_transmit * m;
        const double n = min_neighborhood(
            rate, ChannelPoint{ChannelKind::bsc_from_bpsk_hard, s}, 1e-20);
        if (!std::isfinite(n)) continue;
        CHECK(s + w.gamma * std::log2(n) >= pt.total_norm * (1.0 - 1e-9));
    }
}

TEST_CASE("total power monotone in target and gamma") {
    TechnologyWeights w;
    const double rate = 1.0 / 3.0;
    double prev = 0.0;
    for (double pe : {1e-3, 1e-8, 1e-16, 1e-32}) {
        const double t = total_power_lower(rate, w, pe, ChannelKind::bsc_from_bpsk_hard).total_norm;
        CHECK(t > prev);
        prev = t;
    }
    TechnologyWeights lo;
    lo.gamma = 0.03;
    const double t_lo = total_power_lower(rate, lo, 1e-10, ChannelKind::bsc_from_bpsk_hard).total_norm;
    const double t_hi = total_power_lower(rate, w, 1e-10, ChannelKind::bsc_from_bpsk_hard).total_norm;
    CHECK(t_lo < t_hi);
}

TEST_CASE("total power awgn variants") {
    TechnologyWeights w;
    const double rate = 1.0 / 3.0;
    const auto num = total_power_lower(rate, w, 1e-10, ChannelKind::awgn, BoundVariant::numeric);
    const auto comb = total_power_lower(rate, w, 1e-10, ChannelKind::awgn, BoundVariant::combined);
    CHECK(num.feasible);
    CHECK(comb.feasible);
    // the numeric form is the stronger converse at moderate n, so it demands
    // at least as much total power as the asymptotic form
    const auto asym = total_power_lower(rate, w, 1e-10, ChannelKind::awgn, BoundVariant::asymptotic);
    CHECK(num.total_norm >= asym.total_norm - 1e-9);
}

TEST_CASE("waterslide curve") {
    TechnologyWeights w;
    std::vector<double> grid{1e-2, 1e-5, 1e-10, 1e-20};
    const auto curve = waterslide_curve(1.0 / 3.0, w, grid, ChannelKind::bsc_from_bpsk_hard);
    REQUIRE(curve.size() == 4);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].feasible);
        CHECK(curve[i].target_pe == grid[i]);
        if (i > 0) CHECK(curve[i].total_norm > curve[i - 1].total_norm);
    }
    CHECK_THROWS_AS(waterslide_curve(1.0 / 3.0, w, {}, ChannelKind::awgn),
                    std::invalid_argument);
    CHECK_THROWS_AS(waterslide_curve(1.0 / 3.0, w, {1e-2, 1e-2}, ChannelKind::awgn),
                    std::invalid_argument);
    CHECK_THROWS_AS(waterslide_curve(1.0 / 3.0, w, {1e-5, 1e-2}, ChannelKind::awgn),
                    std::invalid_argument);
    CHECK_THROWS_AS(waterslide_curve(1.0 / 3.0, w, {0.7, 1e-2}, ChannelKind::awgn),
                    std::invalid_argument);
}

TEST_CASE("uncoded versus coded threshold") {
    const double rate = 1.0 / 3.0;
    const double pe = uncoded_coding_threshold(rate, 0.3, 4.0, ChannelKind::bsc_from_bpsk_hard);
    REQUIRE(std::isfinite(pe));
    CHECK(pe > 0.0);
    CHECK(pe < 0.5);

    // fixed point residual
    const double boost = 0.3 * 2.0;
    const double snr = shannon_waterfall_snr(rate, pe, ChannelKind::bsc_from_bpsk_hard) + boost;
    CHECK(repetition_pe(snr, 3) == Catch::Approx(pe).epsilon(1e-6));

    // more decoder budget for the uncoded side pushes the crossover deeper
    const double pe_hi_gamma =
        uncoded_coding_threshold(rate, 1.0, 4.0, ChannelKind::bsc_from_bpsk_hard);
    CHECK(pe_hi_gamma < pe);
    const double pe_hi_alpha =
        uncoded_coding_threshold(rate, 0.3, 16.0, ChannelKind::bsc_from_bpsk_hard);
    CHECK(pe_hi_alpha < pe);

    // unadjusted variant is a direct evaluation at the zero-error threshold
    const double pe_u =
        uncoded_coding_threshold(rate, 0.3, 4.0, ChannelKind::bsc_from_bpsk_hard, false);
    const double thr = min_snr_for_rate(rate, ChannelKind::bsc_from_bpsk_hard);
    CHECK(pe_u == Catch::Approx(repetition_pe(thr + boost, 3)).epsilon(1e-9));

    // awgn side works too
    const double pe_awgn = uncoded_coding_threshold(rate, 0.3, 4.0, ChannelKind::awgn);
    REQUIRE(std::isfinite(pe_awgn));
    CHECK(pe_awgn > 0.0);

    // overwhelming decoder budget: repetition wins everywhere, no crossing
    const double none =
        uncoded_coding_threshold(rate, 1000.0, 4.0, ChannelKind::bsc_from_bpsk_hard);
    CHECK(std::isnan(none));

    CHECK_THROWS_AS(uncoded_coding_threshold(0.25, 0.3, 4.0, ChannelKind::awgn),
                    std::invalid_argument);
    CHECK_THROWS_AS(uncoded_coding_threshold(0.4, 0.3, 4.0, ChannelKind::awgn),
                    std::invalid_argument);
    CHECK_THROWS_AS(uncoded_coding_threshold(rate, -1.0, 4.0, ChannelKind::awgn),
                    std::domain_error);
    CHECK_THROWS_AS(uncoded_coding_threshold(rate, 0.3, 1.0, ChannelKind::awgn),
                    std::domain_error);
}
