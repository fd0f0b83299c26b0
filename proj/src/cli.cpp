// SPDX-License-Identifier: Apache-2.0

#include "m21/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "m21/json_io.hpp"
#include "m21/scan.hpp"
#include "m21/verify_suite.hpp"

namespace m21 {

namespace {

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("output: cannot open \"" + path + "\" for writing");
    out << content;
    if (!out) throw std::invalid_argument("output: write to \"" + path + "\" failed");
}

struct RangeSpec {
    double min = 0.0, max = 0.0, step = 0.0;
};

RangeSpec parse_range(const std::string& text, const std::string& flag) {
    RangeSpec r;
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':'))
        throw std::invalid_argument(flag + ": expected min:max:step, got \"" + text + "\"");
    try {
        r.min = std::stod(a);
        r.max = std::stod(b);
        r.step = std::stod(c);
    } catch (const std::exception&) {
        throw std::invalid_argument(flag + ": expected numeric min:max:step, got \"" + text + "\"");
    }
    return r;
}

int run_analyze(const std::string& channel_path, const std::string& strategy_text,
                std::optional<double> rho2, double tol, const std::string& out_path) {
    StandardChannel ch = load_channel_file(channel_path);
    StrategySpec strategy = StrategySpec::parse(strategy_text, ch.K);
    ValidationReport srep = validate_strategy(ch, strategy);
    if (!srep.ok()) throw std::invalid_argument("strategy: " + srep.joined());

    RateReport rate;
    Json certs = Json::array();
    Json gaps = Json::array();
    auto push_gap = [&](TheoremId id, const GapReport& g) {
        Json jg;
        jg["theorem_id"] = to_string(id);
        const Json body = to_json(g);
        for (const auto& [key, value] : body.items()) jg[key] = value;
        gaps.push_back(std::move(jg));
    };

    if (strategy.mode == ChannelMode::XC) {
        rate = sum_rate_mac_subset(ch, strategy.mac_set);
        if (strategy.mac_set.size() == 1) {
            certs.push_back(to_json(check_t1(ch, tol)));
            Certificate t6 = check_t6(ch, tol);
            certs.push_back(to_json(t6));
            if (t6.holds) push_gap(TheoremId::T6, t6_gap(ch, tol));
        } else if (strategy.mac_set.size() == 2) {
            certs.push_back(to_json(check_t2_t4(ch, strategy.mac_set[1], tol)));
        } else if (ch.K == 3 && strategy.mac_set.size() == 3) {
            T3Gap t3 = rho2 ? t3_gap(ch, *rho2, tol) : t3_gap_auto(ch, tol);
            certs.push_back(to_json(t3.primary.cert));
            certs.push_back(to_json(t3.symmetric.cert));
            if (t3.primary.cert.holds) push_gap(TheoremId::T3, t3.primary.gap);
            if (t3.symmetric.cert.holds) push_gap(TheoremId::T3, t3.symmetric.gap);
        }
    } else {
        std::vector<int> order = strategy.decoding_order;
        if (order.empty() && !strategy.mac_set.empty()) {
            OrderSearch s = best_decoding_order(ch, strategy.mac_set, tol);
            order = s.found ? s.order : strategy.mac_set;
        }
        rate = sum_rate_mi_k(ch, strategy.mac_set, order);
        certs.push_back(to_json(check_t7(ch, strategy.mac_set, tol)));
        if (strategy.mac_set.empty()) {
            T8Result t8 = check_t8(ch, tol);
            certs.push_back(to_json(t8.cert));
            if (t8.cert.holds) push_gap(TheoremId::T8, t8.gap);
        }
    }

    Json out;
    out["channel"] = to_json(ch);
    out["rate_report"] = to_json(rate);
    out["certificates"] = std::move(certs);
    out["gap_reports"] = std::move(gaps);
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int run_recommend(const std::string& channel_path, const std::string& mode_text,
                  std::optional<double> rho2, double tol, const std::string& out_path) {
    StandardChannel ch = load_channel_file(channel_path);
    ChannelMode mode = mode_from_string(mode_text);
    RecommendOptions opts;
    opts.rho2 = rho2;
    opts.tol = tol;
    Recommendation rec = recommend(ch, mode, opts);

    Json out;
    out["channel"] = to_json(ch);
    out["rate_report"] = to_json(rec.best);
    out["certificate"] = rec.certificate ? to_json(*rec.certificate) : Json(nullptr);
    if (rec.gap) out["gap_report"] = to_json(*rec.gap);
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int run_scan(const std::string& channel_path, const std::string& vary, const std::string& range_text,
             const std::string& range_y_text, const std::string& labels_text, const std::string& mode_text,
             double tol, const std::string& out_path) {
    ScanSpec spec;
    spec.base = load_channel_file(channel_path);
    spec.mode = mode_from_string(mode_text);
    spec.tol = tol;

    auto comma = vary.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--vary: expected two comma-separated selectors, got \"" + vary + "\"");
    spec.axis_x.selector = vary.substr(0, comma);
    spec.axis_y.selector = vary.substr(comma + 1);

    RangeSpec rx = parse_range(range_text, "--range");
    RangeSpec ry = range_y_text.empty() ? rx : parse_range(range_y_text, "--range-y");
    spec.axis_x.min = rx.min;
    spec.axis_x.max = rx.max;
    spec.axis_x.step = rx.step;
    spec.axis_y.min = ry.min;
    spec.axis_y.max = ry.max;
    spec.axis_y.step = ry.step;

    std::stringstream ss(labels_text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) spec.labels.push_back(LabelSpec::parse(tok));
    if (spec.labels.empty()) throw std::invalid_argument("--labels: at least one label is required");

    RegionMap map = scan(spec);
    write_output(out_path, region_map_csv(map));
    return 0;
}

int run_rho_delta(double b, std::optional<double> p3, std::optional<double> p3_db,
                  const std::string& delta_text, const std::string& out_path) {
    if (p3 && p3_db) throw std::invalid_argument("--p3: give either --p3 or --p3-db, not both");
    if (!p3 && !p3_db) throw std::invalid_argument("--p3: a value is required (--p3 or --p3-db)");
    const double p3_lin = p3 ? *p3 : db_to_linear(*p3_db);
    RangeSpec dr = parse_range(delta_text, "--delta");
    auto curve = rho_delta_curve(b, p3_lin, dr.min, dr.max, dr.step);
    write_output(out_path, curve_csv(curve));
    return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, std::int64_t samples, double tol,
               const std::string& out_path) {
    VerifyOptions opts;
    opts.suite = suite;
    opts.seed = seed;
    opts.samples = samples;
    opts.tolerance = tol;
    auto results = run_verify_suite(opts);
    std::ostringstream os;
    bool all_pass = true;
    for (const auto& r : results) {
        os << r.line() << "\n";
        all_pass = all_pass && r.pass;
    }
    write_output(out_path, os.str());
    return all_pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Sum-rate capacity toolkit for Gaussian many-to-one X and interference channels"};
    app.require_subcommand(1);

    double tolerance = 1e-9;
    app.add_option("--tolerance", tolerance, "boundary tolerance for theorem conditions")->capture_default_str();

    std::string channel_path, strategy_text, out_path = "-";
    std::optional<double> rho2;
    auto* analyze = app.add_subcommand("analyze", "rate report and applicable certificates for one strategy");
    analyze->add_option("--channel", channel_path, "channel JSON file")->required();
    analyze->add_option("--strategy", strategy_text, "M1 | M2:k | M3 | MAC:i,j,... | MI1 | MI:s[@order]")->required();
    analyze->add_option("--rho2", rho2, "rho^2 for the full-MAC gap certificate (default: tightest feasible)");
    analyze->add_option("--out", out_path, "output path or - for stdout");

    std::string mode_text = "XC";
    auto* rec = app.add_subcommand("recommend", "best strategy and strongest certificate");
    rec->add_option("--channel", channel_path, "channel JSON file")->required();
    rec->add_option("--mode", mode_text, "XC or IC")->capture_default_str();
    rec->add_option("--rho2", rho2, "rho^2 for the full-MAC gap certificate");
    rec->add_option("--out", out_path, "output path or - for stdout");

    std::string vary, range_text, range_y_text, labels_text;
    auto* sc = app.add_subcommand("scan", "2-D region map over two channel parameters");
    sc->add_option("--channel", channel_path, "channel JSON file")->required();
    sc->add_option("--vary", vary, "two selectors, e.g. h2,h3 or h2,P3")->required();
    sc->add_option("--range", range_text, "min:max:step for both axes")->required();
    sc->add_option("--range-y", range_y_text, "override min:max:step for the y axis");
    sc->add_option("--labels", labels_text, "comma list from T1..T8 (T3@rho2=v), best")->required();
    sc->add_option("--mode", mode_text, "XC or IC (affects the best column)")->capture_default_str();
    sc->add_option("--out", out_path, "output CSV path or - for stdout");

    double b = 1.5;
    std::optional<double> p3, p3_db;
    std::string delta_text;
    auto* rd = app.add_subcommand("rho-delta", "rho^2 as a function of the gap budget");
    rd->add_option("--b", b, "cross gain of the treated-as-noise transmitter")->required();
    rd->add_option("--p3", p3, "its power (linear)");
    rd->add_option("--p3-db", p3_db, "its power in dB");
    rd->add_option("--delta", delta_text, "min:max:step over gap bits")->required();
    rd->add_option("--out", out_path, "output CSV path or - for stdout");

    std::string suite = "all";
    std::uint64_t seed = 42;
    std::int64_t samples = 1'000'000;
    auto* vf = app.add_subcommand("verify", "run the numerical verification suite");
    vf->add_option("--suite", suite, "all, exact or mc")->capture_default_str();
    vf->add_option("--seed", seed, "RNG seed")->capture_default_str();
    vf->add_option("--samples", samples, "Monte-Carlo samples per estimate")->capture_default_str();
    vf->add_option("--out", out_path, "output path or - for stdout");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (!(tolerance > 0.0)) throw std::invalid_argument("--tolerance must be positive");
        if (app.got_subcommand(analyze)) return run_analyze(channel_path, strategy_text, rho2, tolerance, out_path);
        if (app.got_subcommand(rec)) return run_recommend(channel_path, mode_text, rho2, tolerance, out_path);
        if (app.got_subcommand(sc))
            return run_scan(channel_path, vary, range_text, range_y_text, labels_text, mode_text, tolerance, out_path);
        if (app.got_subcommand(rd)) return run_rho_delta(b, p3, p3_db, delta_text, out_path);
        if (app.got_subcommand(vf)) return run_verify(suite, seed, samples, tolerance, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace m21
