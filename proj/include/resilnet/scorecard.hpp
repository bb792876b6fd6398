#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace resilnet::scorecard {

// Event-management stages x system domains: the 4x4 assessment matrix.
enum class Stage : std::uint8_t { PlanPrepare, Absorb, Recover, Adapt };
enum class Domain : std::uint8_t { Physical, Information, Cognitive, Social };

constexpr std::array<Stage, 4> all_stages = {Stage::PlanPrepare, Stage::Absorb,
                                             Stage::Recover, Stage::Adapt};
constexpr std::array<Domain, 4> all_domains = {
    Domain::Physical, Domain::Information, Domain::Cognitive, Domain::Social};

std::string to_string(Stage s);
std::string to_string(Domain d);

struct MetricEntry {
    std::string id;
    std::string description;
    std::optional<double> score; // [0,1] when present
    double weight = 1.0;
};

struct MatrixCell {
    Stage stage = Stage::PlanPrepare;
    Domain domain = Domain::Physical;
    std::vector<MetricEntry> entries;
};

enum class AssessmentRole : std::uint8_t { Current, Target };

struct MatrixAssessment {
    AssessmentRole role = AssessmentRole::Current;
    std::vector<MatrixCell> cells; // at most one per (stage, domain)
};

struct CellWeight {
    Stage stage;
    Domain domain;
    double weight = 1.0;
};

struct MatrixScores {
    struct CellScore {
        Stage stage;
        Domain domain;
        std::optional<double> score; // absent when no scored entries
        std::uint32_t scored_entries = 0;
        std::uint32_t unscored_entries = 0;
    };
    std::vector<CellScore> cells;
    std::array<std::optional<double>, 4> stage_scores;  // indexed by Stage
    std::array<std::optional<double>, 4> domain_scores; // indexed by Domain
    double overall = 0.0;
    std::vector<std::string> coverage_gaps; // unscored entries and empty cells
};

// Cell score = weighted mean of scored entries; stage/domain/overall =
// weighted mean of scored cells (cell weights default to 1). Unscored
// entries are excluded and surfaced as coverage gaps. Throws InputError
// when nothing is scored anywhere or any weight is negative.
MatrixScores score_matrix(const MatrixAssessment& assessment,
                          std::span<const CellWeight> cell_weights = {});

struct CellGap {
    Stage stage;
    Domain domain;
    double current = 0.0;
    double target = 0.0;
    double gap = 0.0; // target - current
};

struct GapReport {
    std::vector<CellGap> gaps; // sorted by gap, descending
    // cells that exist or are scored on one side only
    std::vector<std::string> structural_gaps;
};

GapReport gap_analysis(const MatrixAssessment& current,
                       const MatrixAssessment& target);

// Constructed ordinal scale with the fixed 1/2/3 numeric mapping.
enum class Rating : std::uint8_t { Low = 1, Moderate = 2, High = 3 };

std::string to_string(Rating r);

struct LossTriple {
    Rating confidentiality = Rating::Low;
    Rating integrity = Rating::Low;
    Rating availability = Rating::Low;
};

// Highest of the three loss ratings.
Rating streamline_loss(const LossTriple& loss);

// Sum of the numeric loss and threat ratings; higher ranks first.
int composite_priority(Rating loss, Rating threat);

struct Asset {
    std::string name;
    LossTriple loss;
    Rating threat = Rating::Low;
};

struct RankedAsset {
    Asset asset;
    Rating streamlined_loss = Rating::Low;
    int priority = 0;
};

// Descending by priority, ties broken by streamlined loss, then stable
// input order.
std::vector<RankedAsset> rank_assets(std::span<const Asset> assets);

// Formula metrics. Durations, timestamps and costs are unit-agnostic
// non-negative reals (timestamps may be any reals; they are sorted
// before gaps are taken). Means require non-empty input.
double mttid(std::span<const double> discovery_delays);
double mtbsi(std::span<const double> incident_timestamps); // needs >= 2
double mttir(std::span<const double> recovery_durations);
double cost_of_incidents(std::span<const double> cost_items);

struct VulnExposure {
    std::string id;
    double exposure_days = 0.0;
};
double vulnerability_exposure(std::span<const VulnExposure> vulns);
double rogue_change_days(std::span<const double> undetected_days_per_change);
std::size_t root_privilege_count(std::span<const std::string> personnel);
std::size_t component_test_count(std::span<const std::string> untested);

// Traceability sheet for one metric.
struct MetricRecord {
    std::string title;
    std::string purpose;
    std::string relates_to;
    std::string formula;
    std::string collection_frequency;
    std::string who_measures;
    std::string who_acts;
    std::string what_they_do;
    std::string data_source;
};

struct RecordCheck {
    std::string name;
    bool pass = false;
};

struct RecordQuality {
    std::vector<RecordCheck> checks;
    bool overall = false; // all checks pass
};

// Six quality checks: strategy link, quantifiable formula, behavior
// statement, understandable title/purpose, actionable owner, data
// source. Reporting only; never throws.
RecordQuality validate_metric_record(const MetricRecord& record);

} // namespace resilnet::scorecard
