#include "resilnet/scorecard.hpp"

#include "resilnet/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace resilnet::scorecard {

std::string to_string(Stage s) {
    switch (s) {
    case Stage::PlanPrepare: return "plan_prepare";
    case Stage::Absorb: return "absorb";
    case Stage::Recover: return "recover";
    case Stage::Adapt: return "adapt";
    }
    return "?";
}

std::string to_string(Domain d) {
    switch (d) {
    case Domain::Physical: return "physical";
    case Domain::Information: return "information";
    case Domain::Cognitive: return "cognitive";
    case Domain::Social: return "social";
    }
    return "?";
}

std::string to_string(Rating r) {
    switch (r) {
    case Rating::Low: return "low";
    case Rating::Moderate: return "moderate";
    case Rating::High: return "high";
    }
    return "?";
}

namespace {

std::string cell_name(Stage s, Domain d) {
    return to_string(s) + "/" + to_string(d);
}

struct WeightedMean {
    double value_sum = 0.0;
    double weight_sum = 0.0;

    void add(double value, double weight) {
        value_sum += weight * value;
        weight_sum += weight;
    }
    bool valid() const { return weight_sum > 0.0; }
    double get() const { return value_sum / weight_sum; }
};

void check_no_duplicate_cells(const MatrixAssessment& a,
                              const std::string& which) {
    std::set<std::pair<Stage, Domain>> seen;
    for (const auto& cell : a.cells)
        if (!seen.insert({cell.stage, cell.domain}).second)
            throw InputError(which + ": duplicate cell " +
                             cell_name(cell.stage, cell.domain));
}

std::optional<double> cell_score(const MatrixCell& cell,
                                 std::vector<std::string>* gaps) {
    WeightedMean m;
    for (const auto& e : cell.entries) {
        if (e.weight < 0.0)
            throw InputError("entry '" + e.id + "': negative weight");
        if (e.score) {
            if (!(*e.score >= 0.0 && *e.score <= 1.0))
                throw InputError("entry '" + e.id +
                                 "': score out of range [0,1]");
            m.add(*e.score, e.weight);
        } else if (gaps) {
            gaps->push_back(cell_name(cell.stage, cell.domain) + ": entry '" +
                            e.id + "' unscored");
        }
    }
    if (!m.valid()) return std::nullopt;
    return m.get();
}

} // namespace

MatrixScores score_matrix(const MatrixAssessment& assessment,
                          std::span<const CellWeight> cell_weights) {
    check_no_duplicate_cells(assessment, "assessment");

    std::map<std::pair<Stage, Domain>, double> weight_of;
    for (const auto& cw : cell_weights) {
        if (cw.weight < 0.0)
            throw InputError("cell weight " + cell_name(cw.stage, cw.domain) +
                             ": negative weight");
        weight_of[{cw.stage, cw.domain}] = cw.weight;
    }

    MatrixScores out;
    std::array<WeightedMean, 4> per_stage;
    std::array<WeightedMean, 4> per_domain;
    WeightedMean overall;

    for (const auto& cell : assessment.cells) {
        MatrixScores::CellScore cs;
        cs.stage = cell.stage;
        cs.domain = cell.domain;
        for (const auto& e : cell.entries)
            (e.score ? cs.scored_entries : cs.unscored_entries) += 1;
        cs.score = cell_score(cell, &out.coverage_gaps);
        if (cs.score) {
            const auto it = weight_of.find({cell.stage, cell.domain});
            const double w = it == weight_of.end() ? 1.0 : it->second;
            per_stage[static_cast<int>(cell.stage)].add(*cs.score, w);
            per_domain[static_cast<int>(cell.domain)].add(*cs.score, w);
            overall.add(*cs.score, w);
        } else {
            out.coverage_gaps.push_back(cell_name(cell.stage, cell.domain) +
                                        ": no scored entries");
        }
        out.cells.push_back(cs);
    }

    if (!overall.valid())
        throw InputError("assessment: no scored entries anywhere");
    for (int i = 0; i < 4; ++i) {
        if (per_stage[i].valid()) out.stage_scores[i] = per_stage[i].get();
        if (per_domain[i].valid()) out.domain_scores[i] = per_domain[i].get();
    }
    out.overall = overall.get();
    return out;
}

GapReport gap_analysis(const MatrixAssessment& current,
                       const MatrixAssessment& target) {
    check_no_duplicate_cells(current, "current");
    check_no_duplicate_cells(target, "target");

    std::map<std::pair<Stage, Domain>, std::optional<double>> cur, tgt;
    for (const auto& cell : current.cells)
        cur[{cell.stage, cell.domain}] = cell_score(cell, nullptr);
    for (const auto& cell : target.cells)
        tgt[{cell.stage, cell.domain}] = cell_score(cell, nullptr);

    GapReport report;
    for (const auto s : all_stages) {
        for (const auto d : all_domains) {
            const auto ci = cur.find({s, d});
            const auto ti = tgt.find({s, d});
            const bool in_cur = ci != cur.end();
            const bool in_tgt = ti != tgt.end();
            if (!in_cur && !in_tgt) continue;
            if (!in_cur || !in_tgt) {
                report.structural_gaps.push_back(
                    cell_name(s, d) + ": only in " +
                    (in_cur ? "current" : "target") + " assessment");
                continue;
            }
            if (!ci->second || !ti->second) {
                report.structural_gaps.push_back(
                    cell_name(s, d) + ": unscored in " +
                    (!ci->second ? "current" : "target") + " assessment");
                continue;
            }
            report.gaps.push_back(
                {s, d, *ci->second, *ti->second, *ti->second - *ci->second});
        }
    }
    std::stable_sort(report.gaps.begin(), report.gaps.end(),
                     [](const CellGap& a, const CellGap& b) {
                         return a.gap > b.gap;
                     });
    return report;
}

Rating streamline_loss(const LossTriple& loss) {
    return std::max({loss.confidentiality, loss.integrity, loss.availability},
                    [](Rating a, Rating b) {
                        return static_cast<int>(a) < static_cast<int>(b);
                    });
}

int composite_priority(Rating loss, Rating threat) {
    return static_cast<int>(loss) + static_cast<int>(threat);
}

std::vector<RankedAsset> rank_assets(std::span<const Asset> assets) {
    std::vector<RankedAsset> ranked;
    ranked.reserve(assets.size());
    for (const auto& a : assets) {
        const Rating loss = streamline_loss(a.loss);
        ranked.push_back({a, loss, composite_priority(loss, a.threat)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedAsset& a, const RankedAsset& b) {
                         if (a.priority != b.priority)
                             return a.priority > b.priority;
                         return static_cast<int>(a.streamlined_loss) >
                                static_cast<int>(b.streamlined_loss);
                     });
    return ranked;
}

namespace {

double mean_of(std::span<const double> values, const std::string& what) {
    if (values.empty()) throw InputError(what + ": empty input");
    double sum = 0.0;
    for (const double v : values) {
        if (v < 0.0) throw InputError(what + ": negative duration");
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

std::size_t distinct_count(std::span<const std::string> items) {
    std::set<std::string> seen(items.begin(), items.end());
    return seen.size();
}

} // namespace

double mttid(std::span<const double> discovery_delays) {
    return mean_of(discovery_delays, "mttid");
}

double mtbsi(std::span<const double> incident_timestamps) {
    if (incident_timestamps.size() < 2)
        throw InputError("mtbsi: needs at least two incident timestamps");
    std::vector<double> sorted(incident_timestamps.begin(),
                               incident_timestamps.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        sum += sorted[i] - sorted[i - 1];
    return sum / static_cast<double>(sorted.size() - 1);
}

double mttir(std::span<const double> recovery_durations) {
    return mean_of(recovery_durations, "mttir");
}

double cost_of_incidents(std::span<const double> cost_items) {
    double sum = 0.0;
    for (const double c : cost_items) {
        if (c < 0.0) throw InputError("cost_of_incidents: negative cost");
        sum += c;
    }
    return sum;
}

double vulnerability_exposure(std::span<const VulnExposure> vulns) {
    double sum = 0.0;
    for (const auto& v : vulns) {
        if (v.exposure_days < 0.0)
            throw InputError("vulnerability_exposure: negative exposure for '" +
                             v.id + "'");
        sum += v.exposure_days;
    }
    return sum;
}

double rogue_change_days(std::span<const double> undetected_days_per_change) {
    double sum = 0.0;
    for (const double d : undetected_days_per_change) {
        if (d < 0.0)
            throw InputError("rogue_change_days: negative undetected days");
        sum += d;
    }
    return sum;
}

std::size_t root_privilege_count(std::span<const std::string> personnel) {
    return distinct_count(personnel);
}

std::size_t component_test_count(std::span<const std::string> untested) {
    return distinct_count(untested);
}

namespace {

bool filled(const std::string& s) {
    return std::any_of(s.begin(), s.end(),
                       [](unsigned char c) { return !std::isspace(c); });
}

} // namespace

RecordQuality validate_metric_record(const MetricRecord& record) {
    RecordQuality q;
    q.checks = {
        {"links_to_strategy", filled(record.relates_to)},
        {"quantifiable", filled(record.formula)},
        {"drives_behavior", filled(record.what_they_do)},
        {"understandable", filled(record.title) && filled(record.purpose)},
        {"actionable_owner", filled(record.who_acts)},
        {"data_exists", filled(record.data_source)},
    };
    q.overall = std::all_of(q.checks.begin(), q.checks.end(),
                            [](const RecordCheck& c) { return c.pass; });
    return q;
}

} // namespace resilnet::scorecard
