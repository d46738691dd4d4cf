#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oamch/cli.hpp"
#include "run_config.hpp"

using namespace oamch;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "oamch_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto p = temp_path(name);
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

bool round_trips(const std::string& text)
{
    const auto doc = nlohmann::ordered_json::parse(text);
    return doc.dump(2) + "\n" == text;
}

} // namespace

TEST_CASE("angle parsing")
{
    CHECK(cli::parse_angle(json(0.25), "x") == 0.25);
    CHECK(cli::parse_angle(json("0.25"), "x") == 0.25);
    CHECK(cli::parse_angle(json("0.25rad"), "x") == 0.25);
    CHECK(cli::parse_angle(json("45deg"), "x") == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(cli::parse_angle(json(" -90 deg "), "x") == doctest::Approx(-kPi / 2).epsilon(1e-15));
    CHECK_THROWS_AS(cli::parse_angle(json("45 degrees"), "x"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_angle(json("deg"), "x"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_angle(json(true), "x"), cli::ConfigError);
}

TEST_CASE("strict config parsing")
{
    CHECK_NOTHROW(cli::parse_config(json{{"schema_version", 1}}));
    CHECK_THROWS_AS(cli::parse_config(json::object()), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 2}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 1}, {"extra", json::object()}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 1}, {"mc", {{"trial", 5}}}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 1}, {"mc", {{"trials", -5}}}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 1}, {"mc", {{"trials", 2.5}}}}), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 1}, {"ch", {{"theta_a", 0.1}}}}), cli::ConfigError);
    CHECK_THROWS_AS(
        cli::parse_config(json{{"schema_version", 1}, {"ch", {{"canonical", true}, {"theta_a", 0.1}}}}),
        cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_config(json{{"schema_version", 1}, {"scan", {{"theta_policy", "best"}}}}),
                    cli::ConfigError);

    const auto cfg = cli::parse_config(json{{"schema_version", 1},
                                            {"experiment", {{"alpha", "180deg"}, {"theta_b", 0.3}}},
                                            {"mc", {{"trials", 10}, {"seed", 7}}}});
    CHECK(cfg.experiment.alpha.angle() == doctest::Approx(kPi));
    CHECK(cfg.experiment.theta_b.theta() == 0.3);
    CHECK(cfg.mc.trials == 10);
    CHECK(cfg.mc.seed == 7);
    CHECK(cli::parse_config(json::parse(cfg.to_json().dump())).to_json() == cfg.to_json());
}

TEST_CASE("overrides")
{
    json doc{{"schema_version", 1}};
    cli::apply_override(doc, "mc.trials=25");
    cli::apply_override(doc, "experiment.alpha=30deg");
    CHECK(doc["mc"]["trials"] == 25);
    CHECK(doc["experiment"]["alpha"] == "30deg");
    CHECK_THROWS_AS(cli::apply_override(doc, "trials=25"), cli::ConfigError);
    CHECK_THROWS_AS(cli::apply_override(doc, "mc.trials"), cli::ConfigError);
}

TEST_CASE("ch at canonical angles")
{
    const auto r = run({"ch"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("S = 0.2071068\n") != std::string::npos);
    CHECK(run({"ch", "--assert-violation"}).code == cli::kOk);
}

TEST_CASE("ch with all-zero splitters fails the violation assertion")
{
    const std::string cfg = write_temp("zero.json", R"({"schema_version": 1,
        "ch": {"theta_a": 0, "theta_a_prime": 0, "theta_b": "0deg", "theta_b_prime": 0}})");
    const auto plain = run({"ch", "--config", cfg});
    CHECK(plain.code == cli::kOk);
    CHECK(plain.out.find("S = 0.0000000\n") != std::string::npos);
    const auto asserted = run({"ch", "--config", cfg, "--assert-violation"});
    CHECK(asserted.code == cli::kAssertionFailed);
    CHECK(asserted.err.find("assertion failed") != std::string::npos);
}

TEST_CASE("ch paths agree and json round-trips")
{
    for (const char* path : {"analytic", "quadrature", "closed-form"}) {
        const auto r = run({"ch", "--path", path, "--format", "json", "--set", "experiment.alpha=1.3",
                            "--set", "experiment.beta=0.4"});
        REQUIRE(r.code == cli::kOk);
        CHECK(round_trips(r.out));
        const auto doc = json::parse(r.out);
        CHECK(doc["schema_version"] == 1);
        CHECK(doc.contains("inputs_echo"));
        CHECK(doc["results"]["probabilities"].size() == 7);
    }
    const double a = json::parse(run({"ch", "--format", "json", "--set", "experiment.beta=0.4"}).out)["results"]["S"];
    const double q = json::parse(run({"ch", "--format", "json", "--set", "experiment.beta=0.4", "--path",
                                      "quadrature"}).out)["results"]["S"];
    CHECK(std::abs(a - q) < 1e-8);
}

TEST_CASE("config errors exit 2, unreadable config exits 3")
{
    CHECK(run({"ch", "--config", write_temp("broken.json", "{not json")}).code == cli::kConfigError);
    CHECK(run({"ch", "--config", write_temp("noversion.json", R"({"ch": {}})")}).code == cli::kConfigError);
    CHECK(run({"ch", "--config", write_temp("unknown.json", R"({"schema_version": 1, "mc": {"bogus": 1}})")}).code ==
          cli::kConfigError);
    CHECK(run({"ch", "--config", temp_path("does-not-exist.json").string()}).code == cli::kIoError);
    CHECK(run({"ch", "--set", "experiment.alpha=north"}).code == cli::kConfigError);
    CHECK(run({"ch", "--format", "csv"}).code == cli::kConfigError);
    CHECK(run({"frobnicate"}).code == cli::kConfigError);
    CHECK(run({}).code == cli::kConfigError);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("probe")
{
    const auto r = run({"probe", "--format", "json"});
    REQUIRE(r.code == cli::kOk);
    CHECK(round_trips(r.out));
    const auto res = json::parse(r.out)["results"];
    CHECK(res["lambda_sq"][0][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res["lambda_sq"][1][1].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(res["lambda_sq"][0][1].get<double>() < 1e-20);

    const auto text = run({"probe"});
    CHECK(text.code == cli::kOk);
    CHECK(text.out.find("11    ") != std::string::npos);
    CHECK(text.out.find("0.500000000") != std::string::npos);

    const auto degrees = json::parse(run({"probe", "--format", "json", "--set", "experiment.theta_b=90deg"}).out);
    const auto radians = json::parse(
        run({"probe", "--format", "json", "--set", "experiment.theta_b=1.5707963267948966"}).out);
    CHECK(degrees["results"] == radians["results"]);

    const auto closed = run({"probe", "--path", "closed-form", "--format", "json", "--set", "experiment.beta=2.0",
                             "--set", "experiment.theta_a=0.3"});
    const auto analytic =
        run({"probe", "--format", "json", "--set", "experiment.beta=2.0", "--set", "experiment.theta_a=0.3"});
    REQUIRE(closed.code == cli::kOk);
    const auto c = json::parse(closed.out)["results"]["lambda_sq"];
    const auto a = json::parse(analytic.out)["results"]["lambda_sq"];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) CHECK(std::abs(c[i][j].get<double>() - a[i][j].get<double>()) < 1e-12);
    }

    const auto aux = run({"probe", "--path", "closed-form", "--set", "experiment.aux_phases=[0.1,0,0,0]"});
    CHECK(aux.code == cli::kConfigError);
    CHECK(aux.err.find("closed form requires zero auxiliary phases") != std::string::npos);
}

TEST_CASE("mc is byte-identical across invocations and validates trials")
{
    const std::vector<std::string> args{"mc", "--set", "mc.seed=42", "--set", "mc.trials=100000"};
    const auto first = run(args);
    const auto second = run(args);
    REQUIRE(first.code == cli::kOk);
    CHECK(first.out == second.out);
    CHECK(first.out.find("splitmix64-counter/1") != std::string::npos);
    CHECK(first.out.find("S_hat = ") != std::string::npos);

    CHECK(run({"mc", "--set", "mc.trials=0"}).code == cli::kConfigError);
    CHECK(run({"mc", "--set", "mc.efficiency_a=0"}).code == cli::kConfigError);
}

TEST_CASE("mc estimate brackets the prediction")
{
    const auto r = run({"mc", "--format", "json", "--set", "mc.trials=1000000"});
    REQUIRE(r.code == cli::kOk);
    CHECK(round_trips(r.out));
    const auto res = json::parse(r.out)["results"];
    CHECK(res["rng"] == "splitmix64-counter/1");
    CHECK(res["runs"].size() == 4);
    CHECK(res["runs"][1]["setting"] == "a,b'");
    const double s = res["S_hat"];
    const double se = res["std_error"];
    CHECK(std::abs(s - 0.20711) < 4 * se);
}

TEST_CASE("scan writes csv and summary")
{
    const auto csv = temp_path("scan17.csv");
    const auto r = run({"scan", "--out", csv.string()});
    REQUIRE(r.code == cli::kOk);
    std::istringstream lines(slurp(csv));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "alpha,beta,theta_a,theta_a_prime,theta_b,theta_b_prime,S,exceeds_threshold");
    int rows = 0;
    int diagonal = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        REQUIRE(f.size() == 8);
        if (f[0] == f[1]) {
            ++diagonal;
            CHECK(f[6] == "0.207106781");
            CHECK(f[7] == "true");
        }
    }
    CHECK(rows == 17 * 17);
    CHECK(diagonal == 17);

    const std::string summary_text = slurp(csv.string() + ".summary.json");
    CHECK(round_trips(summary_text));
    const auto summary = json::parse(summary_text);
    CHECK(summary["results"]["rows"] == 289);
    CHECK(summary["results"]["best"]["S"].get<double>() == doctest::Approx(0.20710678118654752).epsilon(1e-12));

    CHECK(run({"scan", "--out", "/nonexistent-dir/scan.csv"}).code == cli::kIoError);
    CHECK(run({"scan", "--set", "scan.alpha_steps=1"}).code == cli::kConfigError);
}

TEST_CASE("scan under per-point optimization finds an off-diagonal violation above 0.204")
{
    const auto r = run({"scan", "--format", "json", "--set", "scan.alpha_steps=33", "--set", "scan.beta_steps=33",
                        "--set", "scan.theta_policy=optimize-per-point"});
    REQUIRE(r.code == cli::kOk);
    const auto res = json::parse(r.out)["results"];
    CHECK(res["best"]["S"].get<double>() >= 0.204);
    CHECK(res["table"].size() == 33 * 33);
    bool off_diagonal = false;
    for (const auto& row : res["table"]) {
        if (row["alpha"] != row["beta"] && row["S"].get<double>() > 0.204) off_diagonal = true;
    }
    CHECK(off_diagonal);
}

TEST_CASE("validate")
{
    const auto all = run({"validate", "--samples", "100"});
    CHECK(all.code == cli::kOk);
    CHECK(all.out.find("all suites passed") != std::string::npos);

    const auto one = run({"validate", "--suites", "appendix-a", "--samples", "50"});
    CHECK(one.code == cli::kOk);
    CHECK(one.out.find("appendix-a") != std::string::npos);
    CHECK(one.out.find("azimuthal") == std::string::npos);

    const auto flipped = run({"validate", "--inject-sign-flip", "--samples", "100", "--format", "json"});
    CHECK(flipped.code == cli::kAssertionFailed);
    CHECK(round_trips(flipped.out));
    const auto pos = flipped.err.find("worst discrepancy: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(flipped.err.substr(pos + 19)) > kPi);

    CHECK(run({"validate", "--suites", "nonsense"}).code == cli::kConfigError);
}
