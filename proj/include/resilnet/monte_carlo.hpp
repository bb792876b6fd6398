#pragma once

#include "resilnet/cascade.hpp"
#include "resilnet/metrics.hpp"
#include "resilnet/network.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace resilnet {

enum class EventKind : std::uint8_t { RandomFraction, FixedCount, Explicit };

// Distribution of adverse events sampled per run.
struct EventModel {
    EventKind kind = EventKind::RandomFraction;
    double fraction = 0.1;                   // RandomFraction: per-node damage prob
    std::uint64_t count = 0;                 // FixedCount: uniform k-subset
    std::vector<std::vector<NodeId>> events; // Explicit: round-robin
};

void validate_event_model(const EventModel& model, const Network& net);

// Deterministic given (model, events_key, run). RandomFraction damages
// each node independently, FixedCount draws a uniform k-subset via
// partial Fisher-Yates, Explicit cycles through the provided sets.
AdverseEvent sample_event(const EventModel& model, const Network& net,
                          const rng::Key& events_key, std::uint64_t run);

struct ExperimentConfig {
    NetworkSpec network;
    EventModel event_model;
    std::uint32_t steps = 10;
    CfSpec cf;
    std::uint64_t runs = 1000;
    std::uint64_t seed = 0;
    std::uint32_t threads = 0; // 0 = RESILNET_THREADS env (0/unset = auto)
};

struct ExperimentResult {
    ResilienceProfile profile;
    ResilienceReport report;
    // mean CF of each run, ascending run index; feeds standard errors
    // and paired comparisons
    std::vector<double> run_resilience;
};

// Builds the network once from the topology streams, runs `runs`
// simulations with per-run keys derived from (seed, run index), and
// aggregates in ascending run order. The result is independent of the
// worker thread count.
ExperimentResult run_experiment_full(const ExperimentConfig& cfg);
std::pair<ResilienceProfile, ResilienceReport>
run_experiment(const ExperimentConfig& cfg);

struct SweepGrid {
    std::vector<double> p_m;
    std::vector<double> p_s;
    std::vector<std::uint32_t> t_r;
    ExperimentConfig base;
};

struct SweepRow {
    double p_m = 0.0;
    double p_s = 0.0;
    std::uint32_t t_r = 0;
    double resilience = 0.0;
    double robustness = 0.0;
    double risk = 0.0;
    std::uint64_t runs = 0;
};

struct SweepTable {
    std::vector<SweepRow> rows; // p_m-major, then p_s, then t_r
};

// One experiment per grid point under common random numbers: every point
// reuses the master seed and per-run key derivation, and the active base
// wiring comes from a stream independent of the potential-link stream,
// so it is identical at every point and only the potential links react
// to p_m.
SweepTable run_sweep(const SweepGrid& grid);

// Interaction term R(hi,hi) - R(hi,lo) - R(lo,hi) + R(lo,lo) over the
// four (p_m, p_s) corners; positive means synergy. Throws InputError
// when a corner is missing or ambiguous in the table.
double synergy_index(const SweepTable& table, std::pair<double, double> low,
                     std::pair<double, double> high);

struct ExactOptions {
    std::uint64_t max_outcomes = 1ull << 20;
};

struct ExactResult {
    ResilienceProfile profile; // exact E[CF] and population std per step
    ResilienceReport report;   // runs = number of enumerated outcome paths
    std::uint64_t outcome_count = 0;
};

// Exact expectation by exhaustive enumeration of switch outcomes over an
// explicit event list (uniform event weights). Throws InputError for
// non-explicit event models and LimitError when the outcome space
// exceeds max_outcomes.
ExactResult enumerate_exact(const ExperimentConfig& cfg,
                            const ExactOptions& options = {});

} // namespace resilnet
