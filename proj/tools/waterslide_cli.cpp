// Command-line front end: parses one subcommand plus options into a
// RunConfig and hands it to waterslide::run(). CSV goes to stdout or
// --output; diagnostics go to stderr.

#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "waterslide.hpp"

namespace {

using waterslide::BoundVariant;
using waterslide::ChannelKind;
using waterslide::RunConfig;
using waterslide::SchemeKind;
using waterslide::Subcommand;

double parse_rate(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            const double num = std::stod(s.substr(0, slash));
            const double den = std::stod(s.substr(slash + 1));
            if (den == 0.0) throw std::invalid_argument("zero denominator");
            return num / den;
        }
        return std::stod(s);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--rate: expected a decimal or a fraction like 1/3");
    }
}

ChannelKind kind_of(const std::string& s) {
    return s == "awgn" ? ChannelKind::awgn : ChannelKind::bsc_from_bpsk_hard;
}

BoundVariant variant_of(const std::string& s) {
    if (s == "asymptotic") return BoundVariant::asymptotic;
    if (s == "numeric") return BoundVariant::numeric;
    return BoundVariant::combined;
}

SchemeKind scheme_of(const std::string& s) {
    static const std::map<std::string, SchemeKind> table{
        {"repetition", SchemeKind::repetition},
        {"block-ml", SchemeKind::block_ml},
        {"viterbi", SchemeKind::viterbi},
        {"magic-sequential", SchemeKind::magic_sequential},
        {"magic-syndrome", SchemeKind::magic_syndrome},
    };
    return table.at(s);
}

struct SubState {
    RunConfig cfg;
    std::string rate = "1/3";
    std::string channel = "bsc";
    std::string variant = "combined";
    std::string scheme = "viterbi";
    std::string output;
};

int dispatch(SubState& st, int& exit_code) {
    st.cfg.rate = parse_rate(st.rate);
    st.cfg.kind = kind_of(st.channel);
    st.cfg.variant = variant_of(st.variant);
    st.cfg.scheme = scheme_of(st.scheme);
    if (!st.output.empty()) {
        std::ofstream out(st.output);
        if (!out) {
            std::cerr << "error: cannot open output file " << st.output << '\n';
            exit_code = 1;
            return exit_code;
        }
        exit_code = waterslide::run(st.cfg, out, std::cerr);
    } else {
        exit_code = waterslide::run(st.cfg, std::cout, std::cerr);
    }
    return exit_code;
}

void add_common(CLI::App* sub, SubState& st, bool with_channel, bool with_variant) {
    sub->add_option("--rate", st.rate, "code rate, decimal or fraction like 1/3")
        ->capture_default_str();
    if (with_channel) {
        sub->add_option("--channel", st.channel, "channel family")
            ->check(CLI::IsMember({"bsc", "awgn"}))
            ->capture_default_str();
    }
    if (with_variant) {
        sub->add_option("--variant", st.variant, "converse bound variant")
            ->check(CLI::IsMember({"asymptotic", "numeric", "combined"}))
            ->capture_default_str();
    }
    sub->add_option("-o,--output", st.output, "write CSV to this file instead of stdout");
}

void add_pe_sweep(CLI::App* sub, SubState& st) {
    sub->add_option("--pe-max", st.cfg.pe_max, "largest target error probability")
        ->capture_default_str();
    sub->add_option("--pe-min", st.cfg.pe_min, "smallest target error probability")
        ->capture_default_str();
    sub->add_option("-k,--points", st.cfg.points, "number of sweep points")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "waterslide: converse bounds on the joint transmit and decoding power of\n"
        "iteratively decoded communication systems"};
    app.require_subcommand(1);
    int exit_code = 0;
    std::array<SubState, 7> st;

    {
        SubState& s = st[0];
        s.cfg.subcommand = Subcommand::waterfall;
        s.cfg.pe_max = 1e-1;
        s.cfg.pe_min = 1e-15;
        s.cfg.points = 29;
        CLI::App* sub = app.add_subcommand(
            "waterfall", "Shannon-limit transmit SNR versus target error probability");
        add_common(sub, s, true, false);
        add_pe_sweep(sub, s);
        sub->final_callback([&] { dispatch(s, exit_code); });
    }
    {
        SubState& s = st[1];
        s.cfg.subcommand = Subcommand::waterslide;
        CLI::App* sub = app.add_subcommand(
            "waterslide", "total transmit-plus-decoding power lower bound versus target pe");
        add_common(sub, s, true, true);
        add_pe_sweep(sub, s);
        sub->add_option("--gamma", s.cfg.gamma, "decoder power weight per log2(n)")
            ->capture_default_str();
        sub->add_option("--alpha", s.cfg.alpha, "neighborhood growth factor per iteration")
            ->capture_default_str();
        sub->add_flag("--integer-iterations", s.cfg.integer_iterations,
                      "round iteration counts up to integers in the report");
        sub->final_callback([&] { dispatch(s, exit_code); });
    }
    {
        SubState& s = st[2];
        s.cfg.subcommand = Subcommand::classical;
        s.cfg.pe_max = 1e-2;
        s.cfg.pe_min = 1e-12;
        s.cfg.points = 21;
        CLI::App* sub = app.add_subcommand(
            "classical", "optimized total power of a classical coded scheme versus target pe");
        add_common(sub, s, false, false);
        add_pe_sweep(sub, s);
        sub->add_option("--scheme", s.scheme, "coding scheme")
            ->check(CLI::IsMember({"repetition", "block-ml", "viterbi", "magic-sequential",
                                   "magic-syndrome"}))
            ->capture_default_str();
        sub->add_option("--energy", s.cfg.energy_per_op,
                        "decoder energy per operation, noise-power units")
            ->capture_default_str();
        sub->add_flag("--sphere-packing", s.cfg.use_sphere_packing,
                      "use the sphere-packing exponent for block schemes");
        sub->final_callback([&] { dispatch(s, exit_code); });
    }
    {
        SubState& s = st[3];
        s.cfg.subcommand = Subcommand::optimal_power;
        s.cfg.points = 21;
        CLI::App* sub = app.add_subcommand(
            "optimal-power", "asymptotically optimal transmit SNR versus decoder weight gamma");
        add_common(sub, s, true, false);
        sub->add_option("--gamma-min", s.cfg.gamma_min, "smallest gamma")->capture_default_str();
        sub->add_option("--gamma-max", s.cfg.gamma_max, "largest gamma")->capture_default_str();
        sub->add_option("-k,--points", s.cfg.points, "number of sweep points")
            ->capture_default_str();
        sub->final_callback([&] { dispatch(s, exit_code); });
    }
    {
        SubState& s = st[4];
        s.cfg.subcommand = Subcommand::threshold;
        s.cfg.gamma_min = 0.1;
        s.cfg.gamma_max = 10.0;
        s.cfg.points = 13;
        s.cfg.alpha = 3.0;
        CLI::App* sub = app.add_subcommand(
            "threshold", "error probability below which coding beats uncoded transmission");
        add_common(sub, s, true, false);
        sub->add_option("--gamma-min", s.cfg.gamma_min, "smallest gamma")->capture_default_str();
        sub->add_option("--gamma-max", s.cfg.gamma_max, "largest gamma")->capture_default_str();
        sub->add_option("-k,--points", s.cfg.points, "number of sweep points")
            ->capture_default_str();
        sub->add_option("--alpha", s.cfg.alpha, "neighborhood growth factor per iteration")
            ->capture_default_str();
        sub->add_flag(
            "--unadjusted",
            [&s](std::int64_t count) { s.cfg.adjusted_threshold = count == 0; },
            "freeze the coded side at the zero-error Shannon threshold");
        sub->final_callback([&] { dispatch(s, exit_code); });
    }
    {
        SubState& s = st[5];
        s.cfg.subcommand = Subcommand::gapscan;
        s.cfg.points = 24;
        CLI::App* sub = app.add_subcommand(
            "gapscan", "required neighborhood size versus gap to capacity");
        add_common(sub, s, true, true);
        sub->add_option("--beta", s.cfg.beta, "target pe = gap^beta")->capture_default_str();
        sub->add_flag("--balanced", s.cfg.balanced,
                      "split the gap evenly between rate backoff and error tolerance");
        sub->add_option("--gap-min", s.cfg.gap_min, "smallest gap")->capture_default_str();
        sub->add_option("--gap-max", s.cfg.gap_max, "largest gap")->capture_default_str();
        sub->add_option("-k,--points", s.cfg.points, "number of sweep points")
            ->capture_default_str();
        sub->add_option("--p", s.cfg.base_p, "BSC operating crossover probability")
            ->capture_default_str();
        sub->add_option("--snr", s.cfg.base_snr,
                        "AWGN operating SNR (default: capacity-matched to crossover 0.1)");
        sub->final_callback([&] { dispatch(s, exit_code); });
    }
    {
        SubState& s = st[6];
        s.cfg.subcommand = Subcommand::boundscan;
        s.cfg.points = 37;
        CLI::App* sub = app.add_subcommand(
            "boundscan", "error-probability lower bound versus neighborhood size");
        add_common(sub, s, true, true);
        sub->add_option("--n-min", s.cfg.n_min, "smallest neighborhood size")
            ->capture_default_str();
        sub->add_option("--n-max", s.cfg.n_max, "largest neighborhood size")
            ->capture_default_str();
        sub->add_option("-k,--points", s.cfg.points, "number of sweep points")
            ->capture_default_str();
        sub->add_option("--p", s.cfg.base_p, "BSC operating crossover probability")
            ->capture_default_str();
        sub->add_option("--snr", s.cfg.base_snr,
                        "AWGN operating SNR (default: capacity-matched to crossover 0.1)");
        sub->final_callback([&] { dispatch(s, exit_code); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    return exit_code;
}
