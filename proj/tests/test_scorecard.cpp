#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resilnet/errors.hpp"
#include "resilnet/scorecard.hpp"

#include <random>

using namespace resilnet;
using namespace resilnet::scorecard;

namespace {

MetricEntry entry(const std::string& id, double score, double weight = 1.0) {
    return {id, "", score, weight};
}

MatrixAssessment full_matrix(double score) {
    MatrixAssessment a;
    int n = 0;
    for (const auto s : all_stages)
        for (const auto d : all_domains)
            a.cells.push_back(
                {s, d, {entry("m" + std::to_string(n++), score)}});
    return a;
}

} // namespace

TEST_CASE("weighted cell scoring") {
    MatrixAssessment a;
    a.cells.push_back({Stage::Absorb,
                       Domain::Physical,
                       {entry("a", 0.2, 1.0), entry("b", 0.8, 3.0)}});
    const auto scores = score_matrix(a);
    REQUIRE(scores.cells.size() == 1);
    CHECK(*scores.cells[0].score == doctest::Approx(0.65).epsilon(1e-15));
    CHECK(scores.overall == doctest::Approx(0.65).epsilon(1e-15));
}

TEST_CASE("constant matrices aggregate to the constant at every level") {
    for (const double c : {0.0, 0.25, 0.5, 1.0}) {
        const auto scores = score_matrix(full_matrix(c));
        CHECK(scores.overall == c);
        for (const auto s : all_stages)
            CHECK(*scores.stage_scores[static_cast<int>(s)] == c);
        for (const auto d : all_domains)
            CHECK(*scores.domain_scores[static_cast<int>(d)] == c);
        for (const auto& cell : scores.cells) CHECK(*cell.score == c);
    }
}

TEST_CASE("idempotence holds under arbitrary weights for dyadic scores") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> weight(0.0, 5.0);
    for (int round = 0; round < 200; ++round) {
        MatrixAssessment a;
        std::vector<CellWeight> cell_weights;
        int n = 0;
        for (const auto s : all_stages)
            for (const auto d : all_domains) {
                MatrixCell cell{s, d, {}};
                for (int e = 0; e < 3; ++e)
                    cell.entries.push_back(entry("m" + std::to_string(n++),
                                                 0.5, weight(gen)));
                a.cells.push_back(cell);
                cell_weights.push_back({s, d, weight(gen)});
            }
        const auto scores = score_matrix(a, cell_weights);
        CHECK(scores.overall == 0.5);
        for (const auto s : all_stages)
            CHECK(*scores.stage_scores[static_cast<int>(s)] == 0.5);
    }
}

TEST_CASE("unscored entries are excluded and reported as coverage gaps") {
    MatrixAssessment a;
    a.cells.push_back({Stage::Recover,
                       Domain::Social,
                       {entry("x", 0.5), {"y", "unscored entry", {}, 1.0}}});
    a.cells.push_back({Stage::Adapt, Domain::Social, {}});
    const auto scores = score_matrix(a);
    CHECK(*scores.cells[0].score == 0.5);
    CHECK(scores.cells[0].scored_entries == 1);
    CHECK(scores.cells[0].unscored_entries == 1);
    CHECK(!scores.cells[1].score.has_value());
    REQUIRE(scores.coverage_gaps.size() == 2);
    CHECK(scores.coverage_gaps[0] == "recover/social: entry 'y' unscored");
    CHECK(scores.coverage_gaps[1] == "adapt/social: no scored entries");
}

TEST_CASE("scoring failure modes") {
    MatrixAssessment empty;
    empty.cells.push_back({Stage::Absorb, Domain::Physical, {}});
    CHECK_THROWS_AS(score_matrix(empty), InputError);

    MatrixAssessment negative;
    negative.cells.push_back(
        {Stage::Absorb, Domain::Physical, {entry("a", 0.5, -1.0)}});
    CHECK_THROWS_AS(score_matrix(negative), InputError);

    MatrixAssessment dup = full_matrix(0.5);
    dup.cells.push_back(dup.cells[0]);
    CHECK_THROWS_AS(score_matrix(dup), InputError);
}

TEST_CASE("gap analysis orders shortfalls for prioritization") {
    MatrixAssessment current, target;
    current.cells.push_back(
        {Stage::PlanPrepare, Domain::Physical, {entry("a", 0.25)}});
    target.cells.push_back(
        {Stage::PlanPrepare, Domain::Physical, {entry("a", 0.75)}});
    current.cells.push_back(
        {Stage::Absorb, Domain::Social, {entry("b", 0.5)}});
    target.cells.push_back(
        {Stage::Absorb, Domain::Social, {entry("b", 0.6)}});
    current.cells.push_back(
        {Stage::Adapt, Domain::Cognitive, {entry("c", 0.9)}});
    target.cells.push_back(
        {Stage::Adapt, Domain::Cognitive, {entry("c", 0.3)}});

    const auto report = gap_analysis(current, target);
    REQUIRE(report.gaps.size() == 3);
    CHECK(report.gaps[0].gap == 0.5); // largest shortfall ranks first
    CHECK(report.gaps[0].stage == Stage::PlanPrepare);
    CHECK(report.gaps[1].gap == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(report.gaps[2].gap == doctest::Approx(-0.6).epsilon(1e-12));
    CHECK(report.structural_gaps.empty());
}

TEST_CASE("identical assessments have all-zero gaps") {
    const auto a = full_matrix(0.37);
    const auto report = gap_analysis(a, a);
    REQUIRE(report.gaps.size() == 16);
    for (const auto& g : report.gaps) CHECK(g.gap == 0.0);
}

TEST_CASE("one-sided cells are structural gaps, not failures") {
    MatrixAssessment current, target;
    current.cells.push_back(
        {Stage::Absorb, Domain::Physical, {entry("a", 0.5)}});
    target.cells.push_back(
        {Stage::Recover, Domain::Physical, {entry("b", 0.5)}});
    target.cells.push_back({Stage::Absorb, Domain::Physical, {}});
    const auto report = gap_analysis(current, target);
    CHECK(report.gaps.empty());
    REQUIRE(report.structural_gaps.size() == 2);
    CHECK(report.structural_gaps[0] ==
          "absorb/physical: unscored in target assessment");
    CHECK(report.structural_gaps[1] ==
          "recover/physical: only in target assessment");
}

TEST_CASE("gap shift equivariance") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> score(0.0, 0.5);
    MatrixAssessment current, target;
    int n = 0;
    for (const auto s : all_stages)
        for (const auto d : all_domains) {
            const double c = score(gen), t = score(gen);
            current.cells.push_back(
                {s, d, {entry("c" + std::to_string(n), c)}});
            target.cells.push_back(
                {s, d, {entry("t" + std::to_string(n++), t)}});
        }
    const double delta = 0.25;
    MatrixAssessment shifted = target;
    for (auto& cell : shifted.cells)
        for (auto& e : cell.entries) e.score = *e.score + delta;
    const auto base = gap_analysis(current, target);
    const auto moved = gap_analysis(current, shifted);
    for (const auto& g : moved.gaps) {
        for (const auto& b : base.gaps)
            if (b.stage == g.stage && b.domain == g.domain)
                CHECK(g.gap == doctest::Approx(b.gap + delta).epsilon(1e-12));
    }
}

TEST_CASE("streamlined loss is the maximum rating") {
    CHECK(streamline_loss({Rating::Low, Rating::High, Rating::Moderate}) ==
          Rating::High);
    CHECK(streamline_loss({Rating::Low, Rating::Low, Rating::Low}) ==
          Rating::Low);
    CHECK(streamline_loss({Rating::High, Rating::High, Rating::High}) ==
          Rating::High);

    // commutativity over all orderings of all triples
    const Rating r[] = {Rating::Low, Rating::Moderate, Rating::High};
    for (const auto a : r)
        for (const auto b : r)
            for (const auto c : r) {
                const auto m = streamline_loss({a, b, c});
                CHECK(m == streamline_loss({c, a, b}));
                CHECK(m == streamline_loss({b, c, a}));
                CHECK(static_cast<int>(m) ==
                      std::max({static_cast<int>(a), static_cast<int>(b),
                                static_cast<int>(c)}));
            }
}

TEST_CASE("composite priority is the plain sum and monotone") {
    CHECK(composite_priority(Rating::High, Rating::Moderate) == 5);
    CHECK(composite_priority(Rating::Low, Rating::Low) == 2);
    CHECK(composite_priority(Rating::High, Rating::High) == 6);

    const Rating r[] = {Rating::Low, Rating::Moderate, Rating::High};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i + 1 < 3)
                CHECK(composite_priority(r[i + 1], r[j]) >
                      composite_priority(r[i], r[j]));
            if (j + 1 < 3)
                CHECK(composite_priority(r[i], r[j + 1]) >
                      composite_priority(r[i], r[j]));
        }
}

TEST_CASE("asset ranking depends only on the (loss, threat) pairs") {
    const std::vector<Asset> assets = {
        {"plc", {Rating::Low, Rating::High, Rating::Low}, Rating::Moderate},
        {"hmi", {Rating::Low, Rating::Low, Rating::Low}, Rating::Low},
        {"historian", {Rating::High, Rating::High, Rating::High}, Rating::High},
        {"gateway", {Rating::Moderate, Rating::Low, Rating::Low}, Rating::High},
    };
    const auto ranked = rank_assets(assets);
    REQUIRE(ranked.size() == 4);
    CHECK(ranked[0].asset.name == "historian"); // 6
    CHECK(ranked[1].asset.name == "plc");       // 5, loss High
    CHECK(ranked[2].asset.name == "gateway");   // 5, loss Moderate
    CHECK(ranked[3].asset.name == "hmi");       // 2

    // renaming assets must not change the produced order of pairs
    std::vector<Asset> renamed = assets;
    for (auto& a : renamed) a.name = "x-" + a.name;
    const auto ranked2 = rank_assets(renamed);
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        CHECK(ranked2[i].priority == ranked[i].priority);
        CHECK(ranked2[i].streamlined_loss == ranked[i].streamlined_loss);
    }

    // equal pairs keep stable input order
    const std::vector<Asset> ties = {
        {"first", {Rating::High, Rating::Low, Rating::Low}, Rating::Low},
        {"second", {Rating::High, Rating::Low, Rating::Low}, Rating::Low},
    };
    const auto tied = rank_assets(ties);
    CHECK(tied[0].asset.name == "first");
    CHECK(tied[1].asset.name == "second");
}

TEST_CASE("formula metrics match their quoted definitions") {
    const double delays[] = {2.0, 4.0, 6.0};
    CHECK(mttid(delays) == 4.0);

    const VulnExposure vulns[] = {{"v1", 10.0}, {"v2", 3.0}};
    CHECK(vulnerability_exposure(vulns) == 13.0);

    const double changes[] = {5.0, 2.0};
    CHECK(rogue_change_days(changes) == 7.0);

    const double costs[] = {10000.0, 5000.0};
    CHECK(cost_of_incidents(costs) == 15000.0);

    const double timestamps[] = {6.0, 0.0, 2.0}; // unsorted on purpose
    CHECK(mtbsi(timestamps) == 3.0);

    const double recoveries[] = {1.0, 3.0};
    CHECK(mttir(recoveries) == 2.0);

    const std::string people[] = {"ada", "bob", "ada"};
    CHECK(root_privilege_count(people) == 2);
    const std::string components[] = {"plc1", "plc2", "rtu", "plc1"};
    CHECK(component_test_count(components) == 3);
}

TEST_CASE("formula metric failure modes") {
    CHECK_THROWS_AS(mttid({}), InputError);
    CHECK_THROWS_AS(mttir({}), InputError);
    const double one[] = {1.0};
    CHECK_THROWS_AS(mtbsi(one), InputError);
    const double negative[] = {-1.0};
    CHECK_THROWS_AS(mttid(negative), InputError);
    CHECK_THROWS_AS(rogue_change_days(negative), InputError);
    CHECK_THROWS_AS(cost_of_incidents(negative), InputError);
    const VulnExposure bad[] = {{"v", -2.0}};
    CHECK_THROWS_AS(vulnerability_exposure(bad), InputError);
}

TEST_CASE("duration and cost metrics are homogeneous of degree one") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> value(0.0, 100.0);
    std::uniform_int_distribution<int> len(2, 20);
    for (int round = 0; round < 1000; ++round) {
        std::vector<double> xs(len(gen));
        for (auto& x : xs) x = value(gen);
        std::vector<double> doubled(xs);
        for (auto& x : doubled) x *= 2.0;
        // doubling is an exact scaling, so equality is bitwise
        CHECK(mttid(doubled) == 2.0 * mttid(xs));
        CHECK(mttir(doubled) == 2.0 * mttir(xs));
        CHECK(mtbsi(doubled) == 2.0 * mtbsi(xs));
        CHECK(cost_of_incidents(doubled) == 2.0 * cost_of_incidents(xs));
        CHECK(rogue_change_days(doubled) == 2.0 * rogue_change_days(xs));
    }
}

TEST_CASE("metric record quality checks") {
    MetricRecord record;
    record.title = "Mean time to incident discovery";
    record.purpose = "track detection latency";
    record.relates_to = "incident response objective";
    record.formula = "sum of discovery delays / incident count";
    record.collection_frequency = "monthly";
    record.who_measures = "soc analyst";
    record.who_acts = "security manager";
    record.what_they_do = "adjust monitoring coverage";
    record.data_source = "incident tracker";

    const auto good = validate_metric_record(record);
    CHECK(good.overall);
    for (const auto& c : good.checks) CHECK(c.pass);

    MetricRecord no_formula = record;
    no_formula.formula = "   ";
    const auto q1 = validate_metric_record(no_formula);
    CHECK(!q1.overall);
    for (const auto& c : q1.checks)
        if (c.name == "quantifiable") CHECK(!c.pass);

    MetricRecord no_owner = record;
    no_owner.who_acts.clear();
    const auto q2 = validate_metric_record(no_owner);
    CHECK(!q2.overall);
    for (const auto& c : q2.checks)
        if (c.name == "actionable_owner") CHECK(!c.pass);
}
