// qkdrate: generate channel statistics, invert them into Gram estimates, and
// compute key-rate lower bounds, noise thresholds, and reproduction tables.
//
// Exit codes: 0 success (negative rates included), 2 invalid input,
// 3 mathematical infeasibility (incomplete statistics or empty constraint set).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <qkd/qkd.hpp>

namespace {

using namespace qkd;

constexpr double kInvSqrt2 = 0.7071067811865475244;

// The asymmetric-channel fixture used by `table 3`; mirrors data/table2.stats.
AttackStats bundled_asymmetric_stats() {
    AttackStats s;
    s.psi = PsiMode::Four;
    s.alpha = kInvSqrt2;
    s.beta = kInvSqrt2;
    s.set("0", "0", .868);
    s.set("0", "1", .132);
    s.set("1", "0", .03);
    s.set("1", "1", .97);
    s.set("0", "a", .418);
    s.set("0", "abar", .582);
    s.set("1", "a", .605);
    s.set("1", "abar", .395);
    s.set("a", "0", .536);
    s.set("a", "1", .464);
    s.set("a", "a", .948);
    s.set("a", "abar", .052);
    s.set("0", "b", .564);
    s.set("0", "bbar", .436);
    s.set("1", "b", .486);
    s.set("1", "bbar", .514);
    s.set("b", "0", .472);
    s.set("b", "1", .528);
    s.set("b", "b", .912);
    s.set("b", "bbar", .088);
    return s;
}

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw domain_error("cannot open output file: " + path);
    out << text;
}

struct ChannelSpec {
    enum class Kind { Identity, Depolarizing, Random, TwoWayIdentity, TwoWayDepolarizing,
                      TwoWayRandom } kind = Kind::Identity;
    double q = 0.0;
    std::uint64_t seed = 1;
    std::size_t dim = 4;

    bool is_two_way() const {
        return kind == Kind::TwoWayIdentity || kind == Kind::TwoWayDepolarizing ||
               kind == Kind::TwoWayRandom;
    }
};

ChannelSpec parse_channel(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(pos));
            break;
        }
        parts.push_back(text.substr(pos, colon - pos));
        pos = colon + 1;
    }
    auto number = [&](std::size_t i) {
        try {
            return std::stod(parts.at(i));
        } catch (...) {
            throw domain_error("bad channel spec: " + text);
        }
    };
    ChannelSpec spec;
    const std::string& name = parts[0];
    if (name == "identity") {
        spec.kind = ChannelSpec::Kind::Identity;
    } else if (name == "depolarizing") {
        spec.kind = ChannelSpec::Kind::Depolarizing;
        spec.q = number(1);
    } else if (name == "random") {
        spec.kind = ChannelSpec::Kind::Random;
        spec.seed = static_cast<std::uint64_t>(number(1));
        if (parts.size() > 2) spec.dim = static_cast<std::size_t>(number(2));
    } else if (name == "two-way-identity") {
        spec.kind = ChannelSpec::Kind::TwoWayIdentity;
    } else if (name == "two-way-depolarizing") {
        spec.kind = ChannelSpec::Kind::TwoWayDepolarizing;
        spec.q = number(1);
    } else if (name == "two-way-random") {
        spec.kind = ChannelSpec::Kind::TwoWayRandom;
        spec.seed = static_cast<std::uint64_t>(number(1));
        if (parts.size() > 2) spec.dim = static_cast<std::size_t>(number(2));
    } else {
        throw domain_error("unknown channel kind: " + name);
    }
    return spec;
}

OneWayAttack build_one_way(const ChannelSpec& spec) {
    switch (spec.kind) {
        case ChannelSpec::Kind::Identity: return identity_attack();
        case ChannelSpec::Kind::Depolarizing: return depolarizing_attack(spec.q);
        case ChannelSpec::Kind::Random: return random_attack(spec.seed, spec.dim);
        default: throw domain_error("channel is not one-way");
    }
}

TwoWayAttack build_two_way(const ChannelSpec& spec) {
    switch (spec.kind) {
        case ChannelSpec::Kind::TwoWayIdentity: return identity_two_way_attack();
        case ChannelSpec::Kind::TwoWayDepolarizing:
            return independent_depolarizing_two_way(spec.q);
        case ChannelSpec::Kind::TwoWayRandom:
            return random_two_way_attack(spec.seed, spec.dim);
        default: throw domain_error("channel is not two-way");
    }
}

AttackStats stats_for_psi(AttackStats stats, int psi) {
    if (psi == 3 && stats.psi == PsiMode::Four) return stats.restricted_to_psi3();
    if (psi == 4 && stats.psi == PsiMode::Three)
        throw infeasible_error("statistics were gathered with three states; psi 4 unavailable");
    return stats;
}

AttackStats stats_from_gram(const GramEstimates& g) {
    AttackStats stats;
    stats.psi = g.psi;
    stats.alpha = g.alpha;
    stats.beta = g.beta;
    stats.set("0", "0", g.norm[0]);
    stats.set("0", "1", g.norm[1]);
    stats.set("1", "0", g.norm[2]);
    stats.set("1", "1", g.norm[3]);
    return stats;
}

int run(int argc, char** argv) {
    CLI::App app{"key-rate bounds for QKD protocols from channel statistics"};
    app.require_subcommand(1);

    // stats
    auto* cmd_stats = app.add_subcommand("stats", "simulate channel statistics");
    std::string channel = "identity", out_path;
    int psi = 4;
    double alpha = kInvSqrt2, beta = kInvSqrt2;
    std::uint64_t sample_seed = 1;
    std::size_t samples = 0;
    cmd_stats->add_option("--channel", channel, "channel spec, e.g. depolarizing:0.1");
    cmd_stats->add_option("--psi", psi, "preparation set size (3 or 4)")
        ->check(CLI::IsMember({3, 4}));
    cmd_stats->add_option("--alpha", alpha, "first estimation basis parameter");
    cmd_stats->add_option("--beta", beta, "second estimation basis parameter");
    cmd_stats->add_option("--samples", samples, "finite sampling rounds (exact if omitted)");
    cmd_stats->add_option("--seed", sample_seed, "sampling seed");
    cmd_stats->add_option("-o,--output", out_path, "output file (stdout if omitted)");

    // estimate
    auto* cmd_estimate = app.add_subcommand("estimate", "invert statistics into Gram estimates");
    std::string est_in, est_out;
    int est_psi = 0;
    cmd_estimate->add_option("-i,--in", est_in, "stats file (stdin if omitted)");
    cmd_estimate->add_option("-o,--output", est_out, "output file (stdout if omitted)");
    cmd_estimate->add_option("--psi", est_psi, "restrict to a preparation set before estimating")
        ->check(CLI::IsMember({3, 4}));

    // keyrate
    auto* cmd_keyrate = app.add_subcommand("keyrate", "compute a key-rate lower bound");
    std::string protocol, kr_stats, kr_gram, scenario = "correlated", params_text;
    double alpha_key = 0.0, symmetric_q = -1.0;
    int kr_psi = 0;
    cmd_keyrate->add_option("protocol", protocol, "b92 | bb84 | optpi | sqkd")->required();
    cmd_keyrate->add_option("--stats", kr_stats, "stats file");
    cmd_keyrate->add_option("--gram", kr_gram, "gram file");
    cmd_keyrate->add_option("--alpha-key", alpha_key, "key-distillation basis parameter");
    cmd_keyrate->add_option("--psi", kr_psi, "preparation set restriction")
        ->check(CLI::IsMember({3, 4}));
    cmd_keyrate->add_option("--symmetric", symmetric_q, "depolarizing noise level");
    cmd_keyrate->add_option("--scenario", scenario, "sqkd: independent | correlated");
    cmd_keyrate->add_option("--params", params_text, "optpi: alpha_s,gamma_s,alpha_r,gamma_r");

    // optimize
    auto* cmd_optimize = app.add_subcommand("optimize", "search for the best encoding");
    std::string opt_stats;
    double opt_symmetric = -1.0;
    std::size_t budget = 20000;
    std::uint64_t opt_seed = 1;
    cmd_optimize->add_option("--stats", opt_stats, "stats file");
    cmd_optimize->add_option("--symmetric", opt_symmetric, "depolarizing noise level");
    cmd_optimize->add_option("--budget", budget, "objective evaluation budget");
    cmd_optimize->add_option("--seed", opt_seed, "search seed");

    // threshold
    auto* cmd_threshold = app.add_subcommand("threshold", "noise level where the rate hits zero");
    std::string th_protocol = "b92", th_scenario = "correlated";
    double th_alpha_key = 0.0, th_lo = 1e-4, th_hi = 0.4, th_tol = 1e-4;
    int th_psi = 4;
    cmd_threshold->add_option("--protocol", th_protocol, "b92 | bb84 | sqkd");
    cmd_threshold->add_option("--alpha-key", th_alpha_key, "key-distillation basis parameter");
    cmd_threshold->add_option("--psi", th_psi, "preparation set")->check(CLI::IsMember({3, 4}));
    cmd_threshold->add_option("--scenario", th_scenario, "sqkd: independent | correlated");
    cmd_threshold->add_option("--lo", th_lo, "bracket lower end");
    cmd_threshold->add_option("--hi", th_hi, "bracket upper end");
    cmd_threshold->add_option("--tol", th_tol, "bisection tolerance");

    // table
    auto* cmd_table = app.add_subcommand("table", "regenerate a reproduction table");
    int table_id = 1;
    std::string table_stats;
    cmd_table->add_option("id", table_id, "1, 3, or 5")->required()
        ->check(CLI::IsMember({1, 3, 5}));
    cmd_table->add_option("--stats", table_stats, "override the bundled asymmetric stats");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    const PsiMode psi_mode = psi == 3 ? PsiMode::Three : PsiMode::Four;
    if (cmd_stats->parsed()) {
        const ChannelSpec spec = parse_channel(channel);
        BasisConfig cfg{alpha, beta};
        if (spec.is_two_way()) {
            if (samples > 0)
                throw domain_error("sampled statistics are only available for one-way channels");
            write_output(out_path, serialize_two_way_stats(simulate_two_way_stats(
                                       build_two_way(spec), cfg)));
        } else {
            const OneWayAttack atk = build_one_way(spec);
            const AttackStats stats =
                samples > 0 ? simulate_stats_sampled(atk, cfg, psi_mode, samples, sample_seed)
                            : simulate_stats(atk, cfg, psi_mode);
            write_output(out_path, serialize_stats(stats));
        }
        return 0;
    }

    if (cmd_estimate->parsed()) {
        const StatsDocument doc = parse_stats_file(read_input(est_in));
        if (doc.two_way) {
            write_output(est_out, serialize_two_way_gram(estimate_two_way(doc.two)));
        } else {
            AttackStats stats = doc.one_way;
            if (est_psi != 0) stats = stats_for_psi(stats, est_psi);
            write_output(est_out, serialize_gram(estimate_one_way(stats)));
        }
        return 0;
    }

    auto report_out = [&](const KeyRateReport& r) {
        std::cout << report_csv_header() << "\n" << report_csv_row(r) << "\n";
    };

    if (cmd_keyrate->parsed()) {
        if (protocol == "bb84") {
            protocol = "b92";
            alpha_key = 0.0;
        }
        if (protocol == "b92" || protocol == "optpi") {
            GramEstimates gram;
            AttackStats stats;
            if (symmetric_q >= 0.0) {
                std::tie(gram, stats) = symmetric_channel_data(
                    symmetric_q, kr_psi == 3 ? PsiMode::Three : PsiMode::Four);
            } else if (!kr_stats.empty()) {
                const StatsDocument doc = parse_stats_file(read_input(kr_stats));
                if (doc.two_way) throw domain_error("keyrate " + protocol + ": one-way stats required");
                stats = doc.one_way;
                if (kr_psi != 0) stats = stats_for_psi(stats, kr_psi);
                gram = kr_gram.empty() ? estimate_one_way(stats)
                                       : parse_gram(read_input(kr_gram));
            } else if (!kr_gram.empty()) {
                gram = parse_gram(read_input(kr_gram));
                stats = stats_from_gram(gram);
            } else {
                throw domain_error("keyrate: provide --stats, --gram, or --symmetric");
            }
            if (protocol == "b92") {
                report_out(b92_keyrate(gram, stats, alpha_key));
            } else {
                OptPiParams p = OptPiParams::bb84();
                if (!params_text.empty()) {
                    std::array<double, 4> v{};
                    std::istringstream in(params_text);
                    std::string token;
                    for (int i = 0; i < 4; ++i) {
                        if (!std::getline(in, token, ','))
                            throw domain_error("optpi params must be four comma-separated values");
                        v[i] = std::stod(token);
                    }
                    p = {v[0], v[1], v[2], v[3]};
                }
                report_out(optpi_keyrate(gram, stats, p));
            }
        } else if (protocol == "sqkd") {
            if (symmetric_q >= 0.0) {
                const SqkdScenario sc = scenario == "independent" ? SqkdScenario::Independent
                                                                  : SqkdScenario::Correlated;
                report_out(sqkd_symmetric(symmetric_q, sc));
            } else if (!kr_stats.empty()) {
                const StatsDocument doc = parse_stats_file(read_input(kr_stats));
                if (!doc.two_way) throw domain_error("keyrate sqkd: two-way stats required");
                report_out(sqkd_keyrate(estimate_two_way(doc.two)));
            } else if (!kr_gram.empty()) {
                report_out(sqkd_keyrate(parse_two_way_gram(read_input(kr_gram))));
            } else {
                throw domain_error("keyrate sqkd: provide --stats, --gram, or --symmetric");
            }
        } else {
            throw domain_error("unknown protocol: " + protocol);
        }
        return 0;
    }

    if (cmd_optimize->parsed()) {
        GramEstimates gram;
        AttackStats stats;
        if (opt_symmetric >= 0.0) {
            std::tie(gram, stats) = symmetric_channel_data(opt_symmetric, PsiMode::Four);
        } else if (!opt_stats.empty()) {
            const StatsDocument doc = parse_stats_file(read_input(opt_stats));
            if (doc.two_way) throw domain_error("optimize: one-way stats required");
            stats = doc.one_way;
            gram = estimate_one_way(stats);
        } else {
            throw domain_error("optimize: provide --stats or --symmetric");
        }
        const auto [params, report] = optpi_optimize(gram, stats, budget, opt_seed);
        report_out(report);
        return 0;
    }

    if (cmd_threshold->parsed()) {
        std::function<double(double)> rate_at;
        if (th_protocol == "bb84") {
            th_protocol = "b92";
            th_alpha_key = 0.0;
        }
        const PsiMode m = th_psi == 3 ? PsiMode::Three : PsiMode::Four;
        if (th_protocol == "b92") {
            rate_at = [&](double q) { return b92_symmetric(q, th_alpha_key, m).rate; };
        } else if (th_protocol == "sqkd") {
            const SqkdScenario sc = th_scenario == "independent" ? SqkdScenario::Independent
                                                                 : SqkdScenario::Correlated;
            rate_at = [&, sc](double q) { return sqkd_symmetric(q, sc).rate; };
        } else {
            throw domain_error("unknown protocol: " + th_protocol);
        }
        std::cout << "protocol,psi,alpha_key,scenario,threshold\n";
        std::cout << th_protocol << "," << th_psi << "," << format_value(th_alpha_key) << ","
                  << (th_protocol == "sqkd" ? th_scenario : "-") << ","
                  << format_value(threshold(rate_at, th_lo, th_hi, th_tol)) << "\n";
        return 0;
    }

    if (cmd_table->parsed()) {
        char line[160];
        if (table_id == 1) {
            std::cout << "alpha,psi3_threshold,psi4_threshold\n";
            for (double a : {0.0, 0.342, 0.643, 0.939, 0.985}) {
                const double t3 = threshold(
                    [&](double q) { return b92_symmetric(q, a, PsiMode::Three).rate; }, 1e-6, 0.4);
                const double t4 = threshold(
                    [&](double q) { return b92_symmetric(q, a, PsiMode::Four).rate; }, 1e-6, 0.4);
                std::snprintf(line, sizeof line, "%.3f,%.4f,%.4f\n", a, t3, t4);
                std::cout << line;
            }
        } else if (table_id == 3) {
            AttackStats stats4 = bundled_asymmetric_stats();
            if (!table_stats.empty()) {
                const StatsDocument doc = parse_stats_file(read_input(table_stats));
                if (doc.two_way) throw domain_error("table 3: one-way stats required");
                stats4 = doc.one_way;
            }
            const AttackStats stats3 = stats4.restricted_to_psi3();
            const GramEstimates g4 = estimate_one_way(stats4);
            const GramEstimates g3 = estimate_one_way(stats3);
            std::cout << "alpha_key,psi3_rate,psi4_rate\n";
            for (double ak : {0.0, 0.1, 0.2, 0.342, 0.643}) {
                const double r3 = b92_keyrate(g3, stats3, ak).distillable();
                const double r4 = b92_keyrate(g4, stats4, ak).distillable();
                std::snprintf(line, sizeof line, "%.3f,%.4f,%.4f\n", ak, r3, r4);
                std::cout << line;
            }
        } else {
            std::cout << "scenario,threshold\n";
            const double ti = threshold(
                [](double q) { return sqkd_symmetric(q, SqkdScenario::Independent).rate; }, 1e-6,
                0.3);
            const double tc = threshold(
                [](double q) { return sqkd_symmetric(q, SqkdScenario::Correlated).rate; }, 1e-6,
                0.3);
            std::snprintf(line, sizeof line, "independent,%.4f\ncorrelated,%.4f\n", ti, tc);
            std::cout << line;
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qkd::infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
