#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "waterslide/cli.hpp"

using namespace waterslide;

namespace {

struct Table {
    std::string header;
    std::vector<std::vector<double>> rows;
};

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            t.header = line;
            first = false;
            continue;
        }
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            row.push_back(std::strtod(cell.c_str(), nullptr));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct RunOut {
    int code;
    std::string csv;
    std::string diag;
};

RunOut run_cfg(const RunConfig& cfg) {
    std::ostringstream csv, diag;
    const int code = run(cfg, csv, diag);
    return RunOut{code, csv.str(), diag.str()};
}

}  // namespace

TEST_CASE("waterfall table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::waterfall;
    cfg.pe_max = 1e-1;
    cfg.pe_min = 1e-15;
    cfg.points = 8;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    CHECK(out.diag.empty());
    const auto t = parse_csv(out.csv);
    CHECK(t.header == "log10_pe,snr_linear,snr_db");
    REQUIRE(t.rows.size() == 8);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        REQUIRE(t.rows[i].size() == 3);
        const double snr = t.rows[i][1];
        CHECK(t.rows[i][2] == Catch::Approx(10.0 * std::log10(snr)).margin(1e-12));
        if (i > 0) {
            CHECK(t.rows[i][0] < t.rows[i - 1][0]);  // pe descends
            CHECK(t.rows[i][1] > t.rows[i - 1][1]);  // power grows
        }
    }
    CHECK(t.rows.front()[0] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(t.rows.back()[0] == Catch::Approx(-15.0).margin(1e-12));
}

TEST_CASE("waterslide table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::waterslide;
    cfg.pe_max = 1e-2;
    cfg.pe_min = 1e-20;
    cfg.points = 5;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    CHECK(t.header ==
          "log10_pe,snr_linear,snr_db,n,iterations,decode_power_norm,total_norm,total_db");
    REQUIRE(t.rows.size() == 5);
    const double l2a = std::log2(cfg.alpha);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        REQUIRE(r.size() == 8);
        const double snr = r[1], n = r[3], iters = r[4], decode = r[5], total = r[6];
        CHECK(r[2] == Catch::Approx(10.0 * std::log10(snr)).margin(1e-12));
        CHECK(iters == Catch::Approx(std::log2(n) / l2a).margin(1e-9));
        CHECK(decode == Catch::Approx(cfg.gamma * std::log2(n)).epsilon(1e-9));
        CHECK(total == Catch::Approx(snr + decode).epsilon(1e-12));
        CHECK(r[7] == Catch::Approx(10.0 * std::log10(total)).margin(1e-12));
        if (i > 0) CHECK(total > t.rows[i - 1][6]);
    }
}

TEST_CASE("waterslide integer iterations") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::waterslide;
    cfg.pe_max = 1e-2;
    cfg.pe_min = 1e-10;
    cfg.points = 3;
    cfg.integer_iterations = true;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    const double per_iter = cfg.gamma * std::log2(cfg.alpha);
    for (const auto& r : t.rows) {
        const double iters = r[4];
        CHECK(iters == std::floor(iters));
        CHECK(r[5] == Catch::Approx(per_iter * iters).epsilon(1e-12));
        CHECK(r[6] == Catch::Approx(r[1] + r[5]).epsilon(1e-12));
    }
}

TEST_CASE("classical table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::classical;
    cfg.pe_max = 1e-2;
    cfg.pe_min = 1e-12;
    cfg.points = 6;
    cfg.scheme = SchemeKind::magic_sequential;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    CHECK(t.header == "log10_pe,snr_db,size,decode_power_norm,total_db");
    REQUIRE(t.rows.size() == 6);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        REQUIRE(r.size() == 5);
        CHECK(r[2] > 0.0);
        CHECK(r[3] >= 0.0);
        if (i > 0) CHECK(r[4] > t.rows[i - 1][4]);
    }
}

TEST_CASE("classical repetition branch runs") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::classical;
    cfg.scheme = SchemeKind::repetition;
    cfg.pe_max = 1e-2;
    cfg.pe_min = 1e-6;
    cfg.points = 3;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    for (const auto& r : t.rows) {
        CHECK(r[2] == 3.0);
        CHECK(r[3] == 0.0);
    }
}

TEST_CASE("optimal power table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::optimal_power;
    cfg.gamma_min = 1e-3;
    cfg.gamma_max = 10.0;
    cfg.points = 7;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    CHECK(t.header == "gamma,snr_opt,excess_over_shannon");
    REQUIRE(t.rows.size() == 7);
    const double thr = min_snr_for_rate(cfg.rate, cfg.kind);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        REQUIRE(r.size() == 3);
        CHECK(r[2] == Catch::Approx((r[1] - thr) / thr).epsilon(1e-9));
        if (i > 0) {
            CHECK(r[0] > t.rows[i - 1][0]);
            CHECK(r[1] > t.rows[i - 1][1]);
        }
    }
}

TEST_CASE("threshold table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::threshold;
    cfg.gamma_min = 0.1;
    cfg.gamma_max = 10.0;
    cfg.points = 5;
    cfg.alpha = 3.0;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    CHECK(t.header == "gamma,alpha,pe_threshold");
    REQUIRE(t.rows.size() == 5);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        CHECK(r[1] == 3.0);
        CHECK(r[2] > 0.0);
        CHECK(r[2] < 0.5);
        if (i > 0) CHECK(r[2] < t.rows[i - 1][2]);
    }
    // unadjusted variant changes the numbers
    RunConfig ucfg = cfg;
    ucfg.adjusted_threshold = false;
    const auto uout = run_cfg(ucfg);
    REQUIRE(uout.code == 0);
    CHECK(uout.csv != out.csv);
}

TEST_CASE("gapscan table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::gapscan;
    cfg.gap_min = 1e-3;
    cfg.gap_max = 1e-1;
    cfg.points = 6;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    CHECK(t.header == "gap,log2_gap,n,log2_n");
    REQUIRE(t.rows.size() == 6);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        REQUIRE(r.size() == 4);
        CHECK(r[1] == Catch::Approx(std::log2(r[0])).margin(1e-12));
        CHECK(r[3] == Catch::Approx(std::log2(r[2])).margin(1e-12));
        if (i > 0) CHECK(r[2] <= t.rows[i - 1][2]);  // smaller gap, larger n
    }
    // awgn flavor with the derived default operating point
    RunConfig acfg = cfg;
    acfg.kind = ChannelKind::awgn;
    acfg.points = 4;
    const auto aout = run_cfg(acfg);
    REQUIRE(aout.code == 0);
    CHECK(parse_csv(aout.csv).rows.size() == 4);
}

TEST_CASE("boundscan table") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::boundscan;
    cfg.n_min = 1.0;
    cfg.n_max = 1e9;
    cfg.points = 7;
    const auto out = run_cfg(cfg);
    REQUIRE(out.code == 0);
    const auto t = parse_csv(out.csv);
    CHECK(t.header == "n,log2_n,log2_pe,log10_pe,opt_param,delta");
    REQUIRE(t.rows.size() == 7);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        REQUIRE(r.size() == 6);
        CHECK(r[1] == Catch::Approx(std::log2(r[0])).margin(1e-12));
        CHECK(r[3] == Catch::Approx(r[2] * 0.30102999566398120).epsilon(1e-12));
        if (i > 0) CHECK(r[2] <= t.rows[i - 1][2]);
    }
    // coding-free floor binds at n = 1: log2 pe = log2(base_p)
    CHECK(t.rows.front()[2] == Catch::Approx(std::log2(cfg.base_p)).margin(1e-9));

    // awgn numeric variant with snr near the searchable test-channel floor:
    // small n are infeasible and get skipped, large n still produce rows
    RunConfig acfg;
    acfg.subcommand = Subcommand::boundscan;
    acfg.kind = ChannelKind::awgn;
    acfg.variant = BoundVariant::numeric;
    acfg.base_snr = std::expm1(2.0 * (1.0 / 3.0) * 0.01 * std::numbers::ln2) * 1.01;
    acfg.n_min = 1.0;
    acfg.n_max = 100.0;
    acfg.points = 5;
    const auto aout = run_cfg(acfg);
    CHECK(aout.code == 2);
    CHECK(aout.diag.find("skipping") != std::string::npos);
    const auto at = parse_csv(aout.csv);
    CHECK(at.rows.size() < 5);
    CHECK(!at.rows.empty());
}

TEST_CASE("infeasible sweep points yield exit code 2") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::threshold;
    cfg.gamma_min = 500.0;
    cfg.gamma_max = 2000.0;
    cfg.points = 2;
    const auto out = run_cfg(cfg);
    CHECK(out.code == 2);
    CHECK(parse_csv(out.csv).rows.empty());
    CHECK(out.diag.find("no uncoded/coded crossing") != std::string::npos);
}

TEST_CASE("configuration errors yield exit code 1") {
    RunConfig cfg;
    cfg.subcommand = Subcommand::waterfall;
    cfg.pe_min = 1e-1;
    cfg.pe_max = 1e-3;  // inverted
    const auto out = run_cfg(cfg);
    CHECK(out.code == 1);
    CHECK(out.diag.rfind("error: ", 0) == 0);

    RunConfig rep;
    rep.subcommand = Subcommand::classical;
    rep.scheme = SchemeKind::repetition;
    rep.rate = 0.25;  // 1/rate even
    const auto rout = run_cfg(rep);
    CHECK(rout.code == 1);
    CHECK(rout.diag.rfind("error: ", 0) == 0);

    RunConfig neg;
    neg.subcommand = Subcommand::waterslide;
    neg.gamma = -1.0;
    neg.pe_min = 1e-6;
    neg.points = 2;
    const auto nout = run_cfg(neg);
    CHECK(nout.code == 1);

    RunConfig pts;
    pts.subcommand = Subcommand::gapscan;
    pts.points = 1;
    const auto pout = run_cfg(pts);
    CHECK(pout.code == 1);
}

TEST_CASE("every subcommand is deterministic") {
    std::vector<RunConfig> cfgs;
    {
        RunConfig c;
        c.subcommand = Subcommand::waterfall;
        c.points = 6;
        c.pe_min = 1e-12;
        cfgs.push_back(c);
    }
    {
        RunConfig c;
        c.subcommand = Subcommand::waterslide;
        c.points = 4;
        c.pe_min = 1e-15;
        cfgs.push_back(c);
    }
    {
        RunConfig c;
        c.subcommand = Subcommand::classical;
        c.points = 4;
        c.pe_min = 1e-10;
        cfgs.push_back(c);
    }
    {
        RunConfig c;
        c.subcommand = Subcommand::optimal_power;
        c.points = 5;
        cfgs.push_back(c);
    }
    {
        RunConfig c;
        c.subcommand = Subcommand::threshold;
        c.points = 4;
        c.gamma_min = 0.1;
        c.alpha = 3.0;
        cfgs.push_back(c);
    }
    {
        RunConfig c;
        c.subcommand = Subcommand::gapscan;
        c.points = 4;
        cfgs.push_back(c);
    }
    {
        RunConfig c;
        c.subcommand = Subcommand::boundscan;
        c.points = 6;
        cfgs.push_back(c);
    }
    for (const auto& cfg : cfgs) {
        const auto a = run_cfg(cfg);
        const auto b = run_cfg(cfg);
        CHECK(a.code == b.code);
        CHECK(a.csv == b.csv);
        CHECK(a.diag == b.diag);
        CHECK(a.code == 0);
    }
}
