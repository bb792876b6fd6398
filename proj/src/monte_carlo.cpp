#include "resilnet/monte_carlo.hpp"

#include "resilnet/dd.hpp"
#include "resilnet/errors.hpp"
#include "resilnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace resilnet {

void validate_event_model(const EventModel& model, const Network& net) {
    switch (model.kind) {
    case EventKind::RandomFraction:
        if (!(model.fraction >= 0.0 && model.fraction <= 1.0))
            throw InputError("event_model.d: out of range [0,1]");
        break;
    case EventKind::FixedCount:
        if (model.count > net.node_count())
            throw InputError("event_model.k: exceeds node count");
        break;
    case EventKind::Explicit:
        if (model.events.empty())
            throw InputError("event_model.events: empty list");
        for (const auto& ev : model.events)
            for (const auto& id : ev)
                if (!net.contains(id))
                    throw InputError("event_model.events: unknown node " +
                                     to_string(id));
        break;
    }
}

AdverseEvent sample_event(const EventModel& model, const Network& net,
                          const rng::Key& events_key, std::uint64_t run) {
    AdverseEvent ev;
    const std::uint32_t n = net.node_count();
    switch (model.kind) {
    case EventKind::RandomFraction:
        for (std::uint32_t g = 0; g < n; ++g)
            if (rng::unit(events_key, run, g, 0) < model.fraction)
                ev.nodes.push_back(net.node_id(g));
        break;
    case EventKind::FixedCount: {
        std::vector<std::uint32_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::uint64_t j = 0; j < model.count; ++j) {
            const auto r = rng::below(events_key, run, j, 1, n - j);
            std::swap(idx[j], idx[j + r]);
        }
        std::vector<std::uint32_t> chosen(idx.begin(),
                                          idx.begin() + model.count);
        std::sort(chosen.begin(), chosen.end());
        for (const auto g : chosen) ev.nodes.push_back(net.node_id(g));
        break;
    }
    case EventKind::Explicit:
        ev.nodes = model.events[run % model.events.size()];
        break;
    }
    return ev;
}

namespace {

std::uint32_t resolve_threads(std::uint32_t requested, std::uint64_t runs) {
    std::uint64_t t = requested;
    if (t == 0) {
        if (const char* env = std::getenv("RESILNET_THREADS")) {
            char* end = nullptr;
            const unsigned long v = std::strtoul(env, &end, 10);
            if (end == env || *end != '\0')
                throw InputError("RESILNET_THREADS: not a number");
            t = v;
        }
    }
    if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(t, runs));
}

void check_size_guard(const ExperimentConfig& cfg) {
    if (cfg.runs < 1) throw InputError("runs: must be >= 1");
    if (cfg.steps < 1) throw InputError("steps: must be >= 1");
    const auto samples = static_cast<std::uint64_t>(cfg.steps) + 1;
    if (cfg.runs > (1ull << 32) / samples)
        throw InputError("runs * (steps+1) exceeds the 2^32 sample guard");
}

} // namespace

ExperimentResult run_experiment_full(const ExperimentConfig& cfg) {
    check_size_guard(cfg);
    const Network net = build_network(cfg.network, cfg.seed);
    const CfEvaluator cf(cfg.cf, net);
    validate_event_model(cfg.event_model, net);

    const auto events_key = rng::derive_key(cfg.seed, rng::Stream::Events);
    const auto switching_key =
        rng::derive_key(cfg.seed, rng::Stream::Switching);

    const std::uint64_t runs = cfg.runs;
    std::vector<Trajectory> trajectories(runs);
    const auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            const AdverseEvent ev =
                sample_event(cfg.event_model, net, events_key, i);
            trajectories[i] = simulate_run(net, ev, cfg.steps, cf,
                                           keyed_switch_draw(switching_key, i));
        }
    };

    const std::uint32_t threads = resolve_threads(cfg.threads, runs);
    if (threads <= 1) {
        worker(0, runs);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (runs + threads - 1) / threads;
        for (std::uint32_t w = 0; w < threads; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(runs, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    result.profile = average_profiles(trajectories);
    result.report.resilience = resilience(result.profile);
    result.report.robustness = robustness(result.profile);
    result.report.risk = risk_from_robustness(result.report.robustness);
    result.report.runs = runs;
    result.report.seed = cfg.seed;
    result.report.config_digest = config_digest(cfg);
    result.run_resilience.resize(runs);
    for (std::uint64_t i = 0; i < runs; ++i)
        result.run_resilience[i] = dd::mean(
            trajectories[i].cf_samples.data(), trajectories[i].cf_samples.size());
    return result;
}

std::pair<ResilienceProfile, ResilienceReport>
run_experiment(const ExperimentConfig& cfg) {
    auto full = run_experiment_full(cfg);
    return {std::move(full.profile), std::move(full.report)};
}

SweepTable run_sweep(const SweepGrid& grid) {
    if (grid.p_m.empty() || grid.p_s.empty() || grid.t_r.empty())
        throw InputError("sweep: every parameter list must be non-empty");
    for (const double v : grid.p_m)
        if (!(v >= 0.0 && v <= 1.0))
            throw InputError("sweep.p_m: out of range [0,1]");
    for (const double v : grid.p_s)
        if (!(v >= 0.0 && v <= 1.0))
            throw InputError("sweep.p_s: out of range [0,1]");

    SweepTable table;
    for (const double pm : grid.p_m) {
        for (const double ps : grid.p_s) {
            for (const std::uint32_t tr : grid.t_r) {
                ExperimentConfig cfg = grid.base;
                cfg.network.params.p_m = pm;
                cfg.network.params.p_s = ps;
                cfg.network.params.t_r = tr;
                const auto [profile, report] = run_experiment(cfg);
                table.rows.push_back({pm, ps, tr, report.resilience,
                                      report.robustness, report.risk,
                                      report.runs});
            }
        }
    }
    return table;
}

double synergy_index(const SweepTable& table, std::pair<double, double> low,
                     std::pair<double, double> high) {
    const auto corner = [&](double pm, double ps) {
        const SweepRow* found = nullptr;
        for (const auto& row : table.rows) {
            if (row.p_m != pm || row.p_s != ps) continue;
            if (found)
                throw InputError("synergy_index: corner (p_m=" +
                                 std::to_string(pm) + ", p_s=" +
                                 std::to_string(ps) +
                                 ") is ambiguous (multiple t_r rows)");
            found = &row;
        }
        if (!found)
            throw InputError("synergy_index: corner (p_m=" +
                             std::to_string(pm) + ", p_s=" +
                             std::to_string(ps) + ") missing from table");
        return found->resilience;
    };
    const double r_ll = corner(low.first, low.second);
    const double r_hl = corner(high.first, low.second);
    const double r_lh = corner(low.first, high.second);
    const double r_hh = corner(high.first, high.second);
    return (r_hh - r_ll) - (r_hl - r_ll) - (r_lh - r_ll);
}

namespace {

struct ExactAccumulator {
    std::vector<dd::Sum> mean;
    std::vector<dd::Sum> square;
    std::uint64_t leaves = 0;
    std::uint64_t max_leaves = 0;
};

void exact_dfs(const Network& net, const CfEvaluator& cf, SimState state,
               std::vector<double> samples, double prob, std::uint32_t t,
               std::uint32_t steps, ExactAccumulator& acc) {
    if (t == steps) {
        if (++acc.leaves > acc.max_leaves)
            throw LimitError(
                "exact: switch-outcome space exceeds max_outcomes (" +
                std::to_string(acc.max_leaves) + ")");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            dd::add(acc.mean[i], prob * samples[i]);
            dd::add(acc.square[i], prob * samples[i] * samples[i]);
        }
        return;
    }

    recover(state);
    const auto attempts = collect_attempts(state, net);
    const auto m = static_cast<std::uint32_t>(attempts.size());
    const double ps = net.params.p_s;

    const auto descend = [&](std::uint64_t mask, double branch_prob) {
        SimState next = state;
        for (std::uint32_t b = 0; b < m; ++b)
            if (mask & (1ull << b)) apply_switch(next, attempts[b]);
        propagate(next, net);
        std::vector<double> next_samples = samples;
        next_samples.push_back(compute_cf(next, cf));
        exact_dfs(net, cf, std::move(next), std::move(next_samples),
                  prob * branch_prob, t + 1, steps, acc);
    };

    if (m == 0 || ps == 0.0) {
        descend(0, 1.0);
        return;
    }
    if (ps == 1.0) {
        descend((1ull << m) - 1, 1.0);
        return;
    }
    if (m >= 63 || (1ull << m) > acc.max_leaves)
        throw LimitError(
            "exact: switch-outcome space exceeds max_outcomes (" +
            std::to_string(acc.max_leaves) + ")");
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        const auto successes =
            static_cast<std::uint32_t>(__builtin_popcountll(mask));
        const double branch_prob = std::pow(ps, successes) *
                                   std::pow(1.0 - ps, m - successes);
        descend(mask, branch_prob);
    }
}

} // namespace

ExactResult enumerate_exact(const ExperimentConfig& cfg,
                            const ExactOptions& options) {
    if (cfg.event_model.kind != EventKind::Explicit)
        throw InputError("exact: requires an explicit event list");
    if (cfg.steps < 1) throw InputError("steps: must be >= 1");

    const Network net = build_network(cfg.network, cfg.seed);
    const CfEvaluator cf(cfg.cf, net);
    validate_event_model(cfg.event_model, net);

    const std::size_t len = cfg.steps + 1;
    ExactAccumulator acc;
    acc.mean.resize(len);
    acc.square.resize(len);
    acc.max_leaves = options.max_outcomes;

    const auto& events = cfg.event_model.events;
    const double event_weight = 1.0 / static_cast<double>(events.size());
    for (const auto& nodes : events) {
        SimState st = apply_event(net, {nodes});
        std::vector<double> samples{compute_cf(st, cf)};
        exact_dfs(net, cf, std::move(st), std::move(samples), event_weight, 0,
                  cfg.steps, acc);
    }

    ExactResult result;
    result.outcome_count = acc.leaves;
    result.profile.steps = cfg.steps;
    result.profile.runs = acc.leaves;
    result.profile.mean_cf.resize(len);
    result.profile.std_cf.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double mean = dd::div_by(acc.mean[i], 1.0);
        const double sq = dd::div_by(acc.square[i], 1.0);
        result.profile.mean_cf[i] = mean;
        result.profile.std_cf[i] =
            std::sqrt(std::max(0.0, sq - mean * mean));
    }
    result.report.resilience = resilience(result.profile);
    result.report.robustness = robustness(result.profile);
    result.report.risk = risk_from_robustness(result.report.robustness);
    result.report.runs = acc.leaves;
    result.report.seed = cfg.seed;
    result.report.config_digest = config_digest(cfg);
    return result;
}

} // namespace resilnet
