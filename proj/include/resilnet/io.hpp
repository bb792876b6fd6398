#pragma once

#include "resilnet/metrics.hpp"
#include "resilnet/monte_carlo.hpp"
#include "resilnet/network.hpp"
#include "resilnet/scorecard.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace resilnet {

// Reads and parses a JSON document. Throws InputError on IO or syntax
// problems.
nlohmann::json load_json_file(const std::string& path);

// Config loaders. All schemas are strict: a schema version field is
// required and unknown fields are rejected. On any violation the loader
// throws InputError whose message lists every problem, one
// "json.path: message" line each.
ExperimentConfig parse_simulate_config(const nlohmann::json& doc);
SweepGrid parse_sweep_config(const nlohmann::json& doc);

struct ExactConfig {
    ExperimentConfig experiment;
    ExactOptions options;
};
ExactConfig parse_exact_config(const nlohmann::json& doc);

struct ScoreConfig {
    scorecard::MatrixAssessment assessment;
    std::vector<scorecard::CellWeight> cell_weights;
};
ScoreConfig parse_score_config(const nlohmann::json& doc);

struct GapConfig {
    scorecard::MatrixAssessment current;
    scorecard::MatrixAssessment target;
};
GapConfig parse_gap_config(const nlohmann::json& doc);

std::vector<scorecard::Asset> parse_assets_config(const nlohmann::json& doc);

// Formula-metric request: the metric name plus whichever input list the
// metric takes.
struct MetricConfig {
    std::string metric;
    std::vector<double> numbers;
    std::vector<scorecard::VulnExposure> vulns;
    std::vector<std::string> names;
};
MetricConfig parse_metric_config(const nlohmann::json& doc);
nlohmann::json evaluate_metric(const MetricConfig& cfg);

scorecard::MetricRecord parse_record_config(const nlohmann::json& doc);

// Canonical serialization of the effective configuration (defaults
// resolved). Object keys are sorted, so the digest is stable across
// field order and across CLI overrides vs. inline fields.
nlohmann::json to_json(const ExperimentConfig& cfg);
std::string config_digest(const ExperimentConfig& cfg);

// Audit form of a wired network: the spec fields plus the full explicit
// link list.
nlohmann::json to_json(const Network& net);

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

// Serialized output contracts.
std::string emit_profile_csv(const ResilienceProfile& profile);
std::string emit_report_json(const ResilienceReport& report);
std::string emit_sweep_csv(const SweepTable& table);
std::string emit_plot_svg(const ResilienceProfile& profile);
std::string emit_assets_csv(const std::vector<scorecard::RankedAsset>& ranked);
std::string emit_gap_csv(const scorecard::GapReport& report);

nlohmann::json to_json(const scorecard::MatrixScores& scores);
nlohmann::json to_json(const scorecard::GapReport& report);
nlohmann::json to_json(const scorecard::RecordQuality& quality);
nlohmann::json to_json(const std::vector<Violation>& violations);

// Round-trip counterparts used by tests and the audit path.
ResilienceReport report_from_json(const nlohmann::json& doc);
ResilienceProfile profile_from_csv(const std::string& csv);

} // namespace resilnet
