#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "oamch/errors.hpp"

namespace oamch::cli {

using nlohmann::json;

namespace {

constexpr double kDegree = kPi / 180.0;

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

void reject_unknown(const json& section, const std::string& name, const std::set<std::string>& allowed)
{
    if (!section.is_object()) throw ConfigError("section '" + name + "' must be an object");
    for (const auto& [key, _] : section.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
    }
}

double number(const json& v, const std::string& where)
{
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
    return x;
}

std::uint64_t unsigned_integer(const json& v, const std::string& where)
{
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(where + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

int small_integer(const json& v, const std::string& where)
{
    const auto x = unsigned_integer(v, where);
    if (x > 1000000) throw ConfigError(where + ": too large");
    return static_cast<int>(x);
}

std::string string(const json& v, const std::string& where)
{
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    return v.get<std::string>();
}

bool boolean(const json& v, const std::string& where)
{
    if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
    return v.get<bool>();
}

ProbabilityPath parse_path(const std::string& s)
{
    if (s == "analytic") return ProbabilityPath::analytic;
    if (s == "quadrature") return ProbabilityPath::quadrature;
    if (s == "closed-form") return ProbabilityPath::closed_form;
    throw ConfigError("experiment.probability_path: expected analytic, quadrature or closed-form");
}

ThetaPolicy parse_policy(const std::string& s)
{
    if (s == "fixed-canonical") return ThetaPolicy::fixed_canonical;
    if (s == "optimize-per-point") return ThetaPolicy::optimize_per_point;
    throw ConfigError("scan.theta_policy: expected fixed-canonical or optimize-per-point");
}

OutputFormat parse_format(const std::string& s)
{
    if (s == "text") return OutputFormat::text;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("output.format: expected text, csv or json");
}

void parse_experiment(const json& sec, RunConfig& cfg)
{
    reject_unknown(sec, "experiment",
                   {"alpha", "beta", "theta_a", "theta_b", "step_index", "aux_phases", "probability_path"});
    auto& e = cfg.experiment;
    if (sec.contains("alpha")) e.alpha = wrap_angle(parse_angle(sec["alpha"], "experiment.alpha"));
    if (sec.contains("beta")) e.beta = wrap_angle(parse_angle(sec["beta"], "experiment.beta"));
    if (sec.contains("theta_a")) e.theta_a = BeamSplitterAngle(parse_angle(sec["theta_a"], "experiment.theta_a"));
    if (sec.contains("theta_b")) e.theta_b = BeamSplitterAngle(parse_angle(sec["theta_b"], "experiment.theta_b"));
    if (sec.contains("step_index")) {
        const double l = number(sec["step_index"], "experiment.step_index");
        try {
            e.step_index = StepIndex(l);
        } catch (const InvalidArgument& ex) {
            throw ConfigError(std::string("experiment.step_index: ") + ex.what());
        }
    }
    if (sec.contains("aux_phases")) {
        const auto& a = sec["aux_phases"];
        if (!a.is_array() || a.size() != 4) throw ConfigError("experiment.aux_phases: expected an array of 4 angles");
        for (std::size_t k = 0; k < 4; ++k) {
            e.aux_phases[k] = parse_angle(a[k], "experiment.aux_phases[" + std::to_string(k) + "]");
        }
    }
    if (sec.contains("probability_path")) {
        cfg.probability_path = parse_path(string(sec["probability_path"], "experiment.probability_path"));
    }
}

void parse_ch(const json& sec, RunConfig& cfg)
{
    reject_unknown(sec, "ch", {"canonical", "theta_a", "theta_a_prime", "theta_b", "theta_b_prime"});
    const std::array<const char*, 4> keys{"theta_a", "theta_a_prime", "theta_b", "theta_b_prime"};
    int given = 0;
    for (const char* k : keys) given += sec.contains(k) ? 1 : 0;
    const bool canonical = sec.contains("canonical") ? boolean(sec["canonical"], "ch.canonical") : given == 0;
    if (canonical && given > 0) throw ConfigError("ch: canonical=true excludes explicit theta values");
    if (!canonical && given != 4) {
        throw ConfigError("ch: theta_a, theta_a_prime, theta_b and theta_b_prime are all required");
    }
    cfg.ch_canonical = canonical;
    if (!canonical) {
        cfg.ch_thetas = {parse_angle(sec["theta_a"], "ch.theta_a"), parse_angle(sec["theta_a_prime"], "ch.theta_a_prime"),
                         parse_angle(sec["theta_b"], "ch.theta_b"), parse_angle(sec["theta_b_prime"], "ch.theta_b_prime")};
    }
}

void parse_mc(const json& sec, RunConfig& cfg)
{
    reject_unknown(sec, "mc", {"trials", "efficiency_a", "efficiency_b", "seed"});
    if (sec.contains("trials")) cfg.mc.trials = unsigned_integer(sec["trials"], "mc.trials");
    if (sec.contains("efficiency_a")) cfg.mc.efficiency_a = number(sec["efficiency_a"], "mc.efficiency_a");
    if (sec.contains("efficiency_b")) cfg.mc.efficiency_b = number(sec["efficiency_b"], "mc.efficiency_b");
    if (sec.contains("seed")) cfg.mc.seed = unsigned_integer(sec["seed"], "mc.seed");
    try {
        cfg.mc.validate();
    } catch (const InvalidArgument& ex) {
        throw ConfigError(std::string("mc: ") + ex.what());
    }
}

void parse_scan(const json& sec, RunConfig& cfg)
{
    reject_unknown(sec, "scan",
                   {"alpha_steps", "beta_steps", "theta_policy", "threshold", "tolerance", "coarse_points",
                    "alpha_origin", "beta_origin"});
    auto& g = cfg.scan;
    if (sec.contains("alpha_steps")) g.alpha_steps = small_integer(sec["alpha_steps"], "scan.alpha_steps");
    if (sec.contains("beta_steps")) g.beta_steps = small_integer(sec["beta_steps"], "scan.beta_steps");
    if (sec.contains("theta_policy")) g.theta_policy = parse_policy(string(sec["theta_policy"], "scan.theta_policy"));
    if (sec.contains("threshold")) g.threshold = number(sec["threshold"], "scan.threshold");
    if (sec.contains("tolerance")) g.tolerance = number(sec["tolerance"], "scan.tolerance");
    if (sec.contains("coarse_points")) g.coarse_points = small_integer(sec["coarse_points"], "scan.coarse_points");
    if (sec.contains("alpha_origin")) g.alpha_origin = parse_angle(sec["alpha_origin"], "scan.alpha_origin");
    if (sec.contains("beta_origin")) g.beta_origin = parse_angle(sec["beta_origin"], "scan.beta_origin");
    try {
        g.validate();
    } catch (const InvalidArgument& ex) {
        throw ConfigError(std::string("scan: ") + ex.what());
    }
}

void parse_output(const json& sec, RunConfig& cfg)
{
    reject_unknown(sec, "output", {"format", "path"});
    if (sec.contains("format")) cfg.format = parse_format(string(sec["format"], "output.format"));
    if (sec.contains("path")) cfg.out_path = string(sec["path"], "output.path");
}

} // namespace

ChSettings RunConfig::ch_settings() const
{
    ChSettings s;
    s.alpha = experiment.alpha;
    s.beta = experiment.beta;
    s.step_index = experiment.step_index;
    s.thetas = ch_canonical ? canonical_settings(experiment.alpha, experiment.step_index).thetas : ch_thetas;
    return s;
}

nlohmann::ordered_json RunConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    const auto& e = experiment;
    j["experiment"] = {{"alpha", e.alpha.angle()},
                       {"beta", e.beta.angle()},
                       {"theta_a", e.theta_a.theta()},
                       {"theta_b", e.theta_b.theta()},
                       {"step_index", e.step_index.value()},
                       {"aux_phases", e.aux_phases},
                       {"probability_path", path_name(probability_path)}};
    if (ch_canonical) {
        j["ch"] = {{"canonical", true}};
    } else {
        j["ch"] = {{"canonical", false},
                   {"theta_a", ch_thetas.theta_a},
                   {"theta_a_prime", ch_thetas.theta_a_prime},
                   {"theta_b", ch_thetas.theta_b},
                   {"theta_b_prime", ch_thetas.theta_b_prime}};
    }
    j["mc"] = {{"trials", mc.trials}, {"efficiency_a", mc.efficiency_a}, {"efficiency_b", mc.efficiency_b}, {"seed", mc.seed}};
    j["scan"] = {{"alpha_steps", scan.alpha_steps},
                 {"beta_steps", scan.beta_steps},
                 {"theta_policy", scan.theta_policy == ThetaPolicy::fixed_canonical ? "fixed-canonical" : "optimize-per-point"},
                 {"threshold", scan.threshold},
                 {"tolerance", scan.tolerance},
                 {"coarse_points", scan.coarse_points},
                 {"alpha_origin", scan.alpha_origin},
                 {"beta_origin", scan.beta_origin}};
    nlohmann::ordered_json output = nlohmann::ordered_json::object();
    if (format) output["format"] = format_name(*format);
    if (out_path) output["path"] = *out_path;
    j["output"] = output;
    return j;
}

double parse_angle(const json& value, const std::string& where)
{
    if (value.is_number()) return number(value, where);
    if (!value.is_string()) throw ConfigError(where + ": expected an angle (number or string with deg/rad suffix)");
    const std::string text = trim(value.get<std::string>());
    double scale = 1.0;
    std::string body = text;
    if (text.size() > 3 && text.ends_with("deg")) {
        scale = kDegree;
        body = trim(std::string_view(text).substr(0, text.size() - 3));
    } else if (text.size() > 3 && text.ends_with("rad")) {
        body = trim(std::string_view(text).substr(0, text.size() - 3));
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), x);
    if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty() || !std::isfinite(x)) {
        throw ConfigError(where + ": cannot parse angle '" + text + "'");
    }
    return x * scale;
}

void apply_override(json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq || dot == 0 || dot + 1 == eq) {
        throw ConfigError("--set expects section.key=value, got '" + assignment + "'");
    }
    const std::string section = assignment.substr(0, dot);
    const std::string key = assignment.substr(dot + 1, eq - dot - 1);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    if (!doc.contains(section)) doc[section] = json::object();
    if (!doc[section].is_object()) throw ConfigError("section '" + section + "' must be an object");
    doc[section][key] = value;
}

RunConfig parse_config(const json& doc)
{
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc, "<root>", {"schema_version", "experiment", "ch", "mc", "scan", "output"});
    if (!doc.contains("schema_version")) throw ConfigError("schema_version is required");
    const auto& v = doc["schema_version"];
    if (!v.is_number_integer() || v.get<std::int64_t>() != kSchemaVersion) {
        throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    }
    RunConfig cfg;
    if (doc.contains("experiment")) parse_experiment(doc["experiment"], cfg);
    if (doc.contains("ch")) parse_ch(doc["ch"], cfg);
    if (doc.contains("mc")) parse_mc(doc["mc"], cfg);
    if (doc.contains("scan")) parse_scan(doc["scan"], cfg);
    if (doc.contains("output")) parse_output(doc["output"], cfg);
    return cfg;
}

RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides)
{
    json doc = {{"schema_version", kSchemaVersion}};
    if (path) {
        std::ifstream in(*path);
        if (!in) throw IoError("cannot read config file '" + *path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        doc = json::parse(buf.str(), nullptr, false);
        if (doc.is_discarded()) throw ConfigError("config file '" + *path + "' is not valid JSON");
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_config(doc);
}

std::string format_name(OutputFormat f)
{
    switch (f) {
    case OutputFormat::text: return "text";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    }
    return "text";
}

std::string path_name(ProbabilityPath p)
{
    switch (p) {
    case ProbabilityPath::analytic: return "analytic";
    case ProbabilityPath::quadrature: return "quadrature";
    case ProbabilityPath::closed_form: return "closed-form";
    }
    return "analytic";
}

} // namespace oamch::cli
