#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oamch/ch_test.hpp"
#include "oamch/montecarlo.hpp"
#include "oamch/search.hpp"

namespace oamch::cli {

inline constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { text, csv, json };

struct RunConfig {
    ExperimentSettings experiment;
    ProbabilityPath probability_path = ProbabilityPath::analytic;
    bool ch_canonical = true;
    ThetaQuad ch_thetas;
    McConfig mc{100000, 1.0, 1.0, 42};
    ScanGrid scan;
    std::optional<OutputFormat> format;
    std::optional<std::string> out_path;

    ChSettings ch_settings() const;
    nlohmann::ordered_json to_json() const;
};

/// Parses "0.5", "0.5rad", "45deg" (optional space before the unit) or a JSON number.
double parse_angle(const nlohmann::json& value, const std::string& where);

/// Applies "section.key=value". The value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Strict parse: unknown sections/keys, wrong types and a missing or wrong
/// schema_version raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads the file (IoError if unreadable, ConfigError if malformed), applies
/// overrides, then parses. No file means all defaults.
RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

std::string format_name(OutputFormat f);
std::string path_name(ProbabilityPath p);

} // namespace oamch::cli
