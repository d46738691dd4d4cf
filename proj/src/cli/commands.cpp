#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "oamch/cli.hpp"
#include "oamch/errors.hpp"
#include "oamch/rng.hpp"
#include "oamch/validation.hpp"
#include "run_config.hpp"

namespace oamch::cli {

using ojson = nlohmann::ordered_json;

namespace {

std::string sig(double v, int digits = 9)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    std::string s(buf, res.ptr);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string pad(std::string s, std::size_t width)
{
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

ojson report(const ojson& inputs, const ojson& results)
{
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["inputs_echo"] = inputs;
    j["results"] = results;
    return j;
}

struct Sink {
    std::optional<std::string> path;
    std::ostream& out;

    void emit(const std::string& text) const
    {
        if (!path) {
            out << text;
            return;
        }
        write_file(*path, text);
    }

    static void write_file(const std::string& path, const std::string& text)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        f << text;
        f.close();
        if (!f) throw IoError("failed writing '" + path + "'");
    }
};

OutputFormat pick_format(const RunConfig& cfg, OutputFormat fallback, std::initializer_list<OutputFormat> allowed,
                         const std::string& command)
{
    const OutputFormat f = cfg.format.value_or(fallback);
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
        throw ConfigError("format '" + format_name(f) + "' is not available for " + command);
    }
    return f;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- probe

int cmd_probe(const RunConfig& cfg, const Sink& sink)
{
    const auto& s = cfg.experiment;
    RealMatrix2x2 p{};
    if (cfg.probability_path == ProbabilityPath::closed_form) {
        const auto cf = closed_form_probabilities(s);
        p[0][0] = cf.joint;
        p[0][1] = cf.marginal_a - cf.joint;
        p[1][0] = cf.marginal_b - cf.joint;
        p[1][1] = cf.total - cf.marginal_a - cf.marginal_b + cf.joint;
    } else {
        const auto m = cfg.probability_path == ProbabilityPath::quadrature ? amplitude_matrix_quadrature(s)
                                                                          : amplitude_matrix(s);
        p = m.p;
    }
    const double total = p[0][0] + p[0][1] + p[1][0] + p[1][1];
    if (!(total > 0.0)) throw DegenerateState("all coincidence probabilities vanish");
    const double marg_a = p[0][0] + p[0][1];
    const double marg_b = p[0][0] + p[1][0];

    const auto format = pick_format(cfg, OutputFormat::text, {OutputFormat::text, OutputFormat::json}, "probe");
    if (format == OutputFormat::json) {
        ojson r;
        r["probability_path"] = path_name(cfg.probability_path);
        r["p"] = {{p[0][0], p[0][1]}, {p[1][0], p[1][1]}};
        r["lambda_sq"] = {{p[0][0] / total, p[0][1] / total}, {p[1][0] / total, p[1][1] / total}};
        r["marginal_a"] = marg_a;
        r["marginal_b"] = marg_b;
        r["total"] = total;
        sink.emit(dump(report(cfg.to_json(), r)));
        return kOk;
    }
    std::ostringstream o;
    o << "probe  alpha=" << sig(s.alpha.angle()) << " beta=" << sig(s.beta.angle()) << " theta_a="
      << sig(s.theta_a.theta()) << " theta_b=" << sig(s.theta_b.theta()) << " step_index="
      << sig(s.step_index.value()) << " path=" << path_name(cfg.probability_path) << "\n";
    o << pad("ij", 6) << pad("p_ij", 20) << "|lambda_ij|^2\n";
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            o << pad(std::to_string(i + 1) + std::to_string(j + 1), 6) << pad(sig(p[i][j]), 20)
              << fixed(p[i][j] / total, 9) << "\n";
        }
    }
    o << pad("P(theta_a,inf)", 18) << sig(marg_a) << "  (normalized " << fixed(marg_a / total, 9) << ")\n";
    o << pad("P(inf,theta_b)", 18) << sig(marg_b) << "  (normalized " << fixed(marg_b / total, 9) << ")\n";
    o << pad("P(inf,inf)", 18) << sig(total) << "\n";
    sink.emit(o.str());
    return kOk;
}

// ---------------------------------------------------------------- ch

int cmd_ch(const RunConfig& cfg, const Sink& sink, bool assert_violation, std::ostream& err)
{
    const auto settings = cfg.ch_settings();
    const auto r = ch_parameter(settings, cfg.probability_path);
    const auto verdict = ch_violated(r);
    const std::array<const char*, 4> names{"P(a,b)", "P(a,b')", "P(a',b)", "P(a',b')"};

    const auto format = pick_format(cfg, OutputFormat::text, {OutputFormat::text, OutputFormat::json}, "ch");
    if (format == OutputFormat::json) {
        ojson res;
        res["thetas"] = {{"theta_a", settings.thetas.theta_a},
                         {"theta_a_prime", settings.thetas.theta_a_prime},
                         {"theta_b", settings.thetas.theta_b},
                         {"theta_b_prime", settings.thetas.theta_b_prime}};
        ojson probs;
        for (std::size_t k = 0; k < 4; ++k) probs[names[k]] = r.p_joint[k];
        probs["P(a',inf)"] = r.p_marg_a;
        probs["P(inf,b)"] = r.p_marg_b;
        probs["P(inf,inf)"] = r.p_total;
        res["probabilities"] = probs;
        res["S"] = r.s;
        res["violated"] = verdict.violated;
        sink.emit(dump(report(cfg.to_json(), res)));
    } else {
        std::ostringstream o;
        const auto& t = settings.thetas;
        o << "ch  alpha=" << sig(settings.alpha.angle()) << " beta=" << sig(settings.beta.angle())
          << " path=" << path_name(cfg.probability_path) << "\n";
        o << "thetas  a=" << sig(t.theta_a) << " a'=" << sig(t.theta_a_prime) << " b=" << sig(t.theta_b)
          << " b'=" << sig(t.theta_b_prime) << "\n";
        for (std::size_t k = 0; k < 4; ++k) o << pad(names[k], 12) << sig(r.p_joint[k]) << "\n";
        o << pad("P(a',inf)", 12) << sig(r.p_marg_a) << "\n";
        o << pad("P(inf,b)", 12) << sig(r.p_marg_b) << "\n";
        o << pad("P(inf,inf)", 12) << sig(r.p_total) << "\n";
        o << "S = " << fixed(r.s, 7) << "\n";
        o << (verdict.violated ? "CH inequality violated (S > 0)\n" : "no violation (S <= 0)\n");
        sink.emit(o.str());
    }
    if (assert_violation && !verdict.violated) {
        err << "assertion failed: S = " << fixed(r.s, 7) << " is not > 0\n";
        return kAssertionFailed;
    }
    return kOk;
}

// ---------------------------------------------------------------- mc

int cmd_mc(const RunConfig& cfg, const Sink& sink)
{
    const auto runs = sample_ch_runs(cfg.ch_settings(), cfg.mc);
    const auto est = estimate_S(runs);

    const auto format = pick_format(cfg, OutputFormat::text, {OutputFormat::text, OutputFormat::json}, "mc");
    if (format == OutputFormat::json) {
        ojson res;
        res["rng"] = std::string(kRngAlgorithm);
        ojson arr = ojson::array();
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& rec = runs[k];
            const auto& f = est.frequencies[k];
            arr.push_back({{"setting", std::string(label_name(rec.label))},
                           {"trials", rec.trials},
                           {"counts", {{"11", rec.n[0][0]}, {"12", rec.n[0][1]}, {"21", rec.n[1][0]}, {"22", rec.n[1][1]}}},
                           {"no_coincidence", rec.no_coincidence},
                           {"frequencies", {{"11", f[0][0]}, {"12", f[0][1]}, {"21", f[1][0]}, {"22", f[1][1]}}}});
        }
        res["runs"] = arr;
        res["S_hat"] = est.s_hat;
        res["std_error"] = est.std_error;
        sink.emit(dump(report(cfg.to_json(), res)));
        return kOk;
    }
    std::ostringstream o;
    o << "mc  rng=" << kRngAlgorithm << " seed=" << cfg.mc.seed << " trials=" << cfg.mc.trials
      << " efficiency_a=" << sig(cfg.mc.efficiency_a) << " efficiency_b=" << sig(cfg.mc.efficiency_b) << "\n";
    o << pad("setting", 9) << pad("n11", 10) << pad("n12", 10) << pad("n21", 10) << pad("n22", 10) << pad("none", 10)
      << pad("F11", 13) << pad("F12", 13) << pad("F21", 13) << "F22\n";
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& rec = runs[k];
        const auto& f = est.frequencies[k];
        o << pad(std::string(label_name(rec.label)), 9);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) o << pad(std::to_string(rec.n[i][j]), 10);
        }
        o << pad(std::to_string(rec.no_coincidence), 10);
        o << pad(fixed(f[0][0], 9), 13) << pad(fixed(f[0][1], 9), 13) << pad(fixed(f[1][0], 9), 13)
          << fixed(f[1][1], 9) << "\n";
    }
    o << "S_hat = " << fixed(est.s_hat, 7) << " +/- " << fixed(est.std_error, 7) << "\n";
    sink.emit(o.str());
    return kOk;
}

// ---------------------------------------------------------------- scan

ojson row_json(const ScanRow& r)
{
    return {{"alpha", r.alpha},
            {"beta", r.beta},
            {"theta_a", r.thetas.theta_a},
            {"theta_a_prime", r.thetas.theta_a_prime},
            {"theta_b", r.thetas.theta_b},
            {"theta_b_prime", r.thetas.theta_b_prime},
            {"S", r.s},
            {"exceeds_threshold", r.exceeds_threshold}};
}

std::string scan_csv(const ScanResult& res)
{
    std::string s = "alpha,beta,theta_a,theta_a_prime,theta_b,theta_b_prime,S,exceeds_threshold\n";
    for (const auto& r : res.rows) {
        for (double v : {r.alpha, r.beta, r.thetas.theta_a, r.thetas.theta_a_prime, r.thetas.theta_b,
                         r.thetas.theta_b_prime, r.s}) {
            s += sig(v);
            s += ',';
        }
        s += r.exceeds_threshold ? "true\n" : "false\n";
    }
    return s;
}

int cmd_scan(const RunConfig& cfg, const Sink& sink, std::ostream& err)
{
    const auto res = scan_alpha_beta(cfg.scan, cfg.experiment.step_index);
    const auto exceeding = std::count_if(res.rows.begin(), res.rows.end(), [](const ScanRow& r) { return r.exceeds_threshold; });
    ojson summary;
    summary["rows"] = res.rows.size();
    summary["exceeding_threshold"] = exceeding;
    summary["best"] = row_json(res.best);

    const auto format = pick_format(cfg, OutputFormat::csv, {OutputFormat::csv, OutputFormat::json}, "scan");
    if (format == OutputFormat::json) {
        ojson full = summary;
        ojson rows = ojson::array();
        for (const auto& r : res.rows) rows.push_back(row_json(r));
        full["table"] = rows;
        sink.emit(dump(report(cfg.to_json(), full)));
        return kOk;
    }
    sink.emit(scan_csv(res));
    const std::string text = dump(report(cfg.to_json(), summary));
    if (sink.path) {
        Sink::write_file(*sink.path + ".summary.json", text);
    } else {
        err << "best S = " << fixed(res.best.s, 7) << " at alpha=" << sig(res.best.alpha) << " beta=" << sig(res.best.beta)
            << "; " << exceeding << " of " << res.rows.size() << " points exceed " << sig(cfg.scan.threshold) << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const RunConfig& cfg, const Sink& sink, const std::vector<std::string>& suites,
                 const ValidationOptions& opts, std::ostream& err)
{
    const auto results = run_suites(suites, opts);
    const bool all = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
    const SuiteResult* worst = nullptr;
    for (const auto& r : results) {
        if (!r.passed && (!worst || r.worst / r.tolerance > worst->worst / worst->tolerance)) worst = &r;
    }

    const auto format = pick_format(cfg, OutputFormat::text, {OutputFormat::text, OutputFormat::json}, "validate");
    if (format == OutputFormat::json) {
        ojson inputs;
        inputs["suites"] = suites;
        inputs["samples"] = opts.samples;
        inputs["seed"] = opts.seed;
        inputs["flip_integral_sign"] = opts.flip_integral_sign;
        ojson arr = ojson::array();
        for (const auto& r : results) {
            arr.push_back({{"suite", r.name},
                           {"passed", r.passed},
                           {"worst", r.worst},
                           {"tolerance", r.tolerance},
                           {"samples", r.samples},
                           {"detail", r.detail}});
        }
        ojson res;
        res["suites"] = arr;
        res["all_passed"] = all;
        sink.emit(dump(report(inputs, res)));
    } else {
        std::ostringstream o;
        for (const auto& r : results) {
            o << pad(r.name, 13) << (r.passed ? "PASS" : "FAIL") << "  worst=" << sig(r.worst, 3)
              << "  tol=" << sig(r.tolerance, 3) << "  n=" << r.samples << "  " << r.detail << "\n";
        }
        o << (all ? "all suites passed\n" : "validation FAILED\n");
        sink.emit(o.str());
    }
    if (worst) {
        err << "worst discrepancy: " << sig(worst->worst, 6) << " in suite " << worst->name << " (tolerance "
            << sig(worst->tolerance, 3) << ")\n";
        return kAssertionFailed;
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulator for an interferometric Clauser-Horne test of OAM entanglement", "oamch"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--set", overrides, "Override a config value: section.key=value (repeatable)")->allow_extra_args(false);
    app.add_option("--out", out_path, "Write the report to this path instead of stdout");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));

    std::optional<std::string> path;
    auto* probe = app.add_subcommand("probe", "Amplitudes and probabilities for one setting");
    probe->add_option("--path", path, "Probability path")->check(CLI::IsMember({"analytic", "quadrature", "closed-form"}));

    bool assert_violation = false;
    auto* ch = app.add_subcommand("ch", "Clauser-Horne parameter for four splitter angles");
    ch->add_option("--path", path, "Probability path")->check(CLI::IsMember({"analytic", "quadrature", "closed-form"}));
    ch->add_flag("--assert-violation", assert_violation, "Exit 1 unless S > 0");

    auto* mc = app.add_subcommand("mc", "Monte Carlo photon-counting estimate of S");
    auto* scan = app.add_subcommand("scan", "S landscape over plate orientations");

    std::vector<std::string> suites;
    ValidationOptions vopts;
    auto* validate = app.add_subcommand("validate", "Analytic-vs-quadrature oracle suites");
    validate->add_option("--suites", suites, "Comma-separated suites (default: all)")->delimiter(',')->allow_extra_args(false);
    validate->add_option("--samples", vopts.samples, "Random samples per suite")->check(CLI::PositiveNumber);
    validate->add_flag("--inject-sign-flip", vopts.flip_integral_sign)->group("");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (path) overrides.push_back("experiment.probability_path=\"" + *path + "\"");
        if (format) overrides.push_back("output.format=\"" + *format + "\"");
        if (out_path) overrides.push_back("output.path=" + nlohmann::json(*out_path).dump());
        const RunConfig cfg = load_config(config_path, overrides);
        const Sink sink{cfg.out_path, out};

        if (*probe) return cmd_probe(cfg, sink);
        if (*ch) return cmd_ch(cfg, sink, assert_violation, err);
        if (*mc) return cmd_mc(cfg, sink);
        if (*scan) return cmd_scan(cfg, sink, err);
        if (*validate) return cmd_validate(cfg, sink, suites, vopts, err);
        err << "error: no subcommand\n";
        return kConfigError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const InsufficientStatistics& e) {
        err << "error: " << e.what() << "\n";
        return kAssertionFailed;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DegenerateState& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }
}

} // namespace oamch::cli
