#include "resilnet/cli.hpp"

#include "resilnet/errors.hpp"
#include "resilnet/io.hpp"
#include "resilnet/monte_carlo.hpp"
#include "resilnet/scorecard.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>

namespace resilnet {

namespace {

struct CliOptions {
    std::string config;
    std::optional<std::uint64_t> runs;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string report_path;
    std::string svg_path;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config, "JSON configuration file");
    cmd->add_option("--runs", opt.runs, "override the configured run count");
    cmd->add_option("--seed", opt.seed, "override the configured master seed");
    cmd->add_option("--out", opt.out_path, "CSV output path");
    cmd->add_option("--report", opt.report_path, "JSON report path");
    cmd->add_option("--svg", opt.svg_path, "resilience profile SVG path");
}

void write_output(const std::string& path, const std::string& content,
                  std::ostream& fallback) {
    if (path.empty()) {
        fallback << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush())
        throw InputError("cannot write '" + path + "'");
}

nlohmann::json load_config(const CliOptions& opt) {
    if (opt.config.empty())
        throw UsageError("--config is required for this command");
    return load_json_file(opt.config);
}

void apply_overrides(const CliOptions& opt, ExperimentConfig& cfg) {
    if (opt.runs) cfg.runs = *opt.runs;
    if (opt.seed) cfg.seed = *opt.seed;
}

int cmd_simulate(const CliOptions& opt, std::ostream& out) {
    auto cfg = parse_simulate_config(load_config(opt));
    apply_overrides(opt, cfg);
    const auto [profile, report] = run_experiment(cfg);
    if (!opt.out_path.empty())
        write_output(opt.out_path, emit_profile_csv(profile), out);
    if (!opt.svg_path.empty())
        write_output(opt.svg_path, emit_plot_svg(profile), out);
    write_output(opt.report_path, emit_report_json(report), out);
    return 0;
}

int cmd_sweep(const CliOptions& opt, std::ostream& out) {
    auto grid = parse_sweep_config(load_config(opt));
    apply_overrides(opt, grid.base);
    const auto table = run_sweep(grid);
    write_output(opt.out_path, emit_sweep_csv(table), out);
    return 0;
}

int cmd_exact(const CliOptions& opt, std::ostream& out) {
    auto cfg = parse_exact_config(load_config(opt));
    apply_overrides(opt, cfg.experiment);
    const auto result = enumerate_exact(cfg.experiment, cfg.options);
    if (!opt.out_path.empty())
        write_output(opt.out_path, emit_profile_csv(result.profile), out);
    if (!opt.svg_path.empty())
        write_output(opt.svg_path, emit_plot_svg(result.profile), out);
    write_output(opt.report_path, emit_report_json(result.report), out);
    return 0;
}

int cmd_score(const CliOptions& opt, std::ostream& out) {
    const auto cfg = parse_score_config(load_config(opt));
    const auto scores =
        scorecard::score_matrix(cfg.assessment, cfg.cell_weights);
    write_output(opt.report_path, to_json(scores).dump(2) + "\n", out);
    return 0;
}

int cmd_gap(const CliOptions& opt, std::ostream& out) {
    const auto cfg = parse_gap_config(load_config(opt));
    const auto report = scorecard::gap_analysis(cfg.current, cfg.target);
    if (!opt.report_path.empty())
        write_output(opt.report_path, to_json(report).dump(2) + "\n", out);
    write_output(opt.out_path, emit_gap_csv(report), out);
    return 0;
}

int cmd_rank_assets(const CliOptions& opt, std::ostream& out) {
    const auto assets = parse_assets_config(load_config(opt));
    const auto ranked = scorecard::rank_assets(assets);
    if (!opt.report_path.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& r : ranked)
            list.push_back(
                {{"asset", r.asset.name},
                 {"loss", scorecard::to_string(r.streamlined_loss)},
                 {"threat", scorecard::to_string(r.asset.threat)},
                 {"priority", r.priority}});
        nlohmann::json j;
        j["ranked"] = list;
        write_output(opt.report_path, j.dump(2) + "\n", out);
    }
    write_output(opt.out_path, emit_assets_csv(ranked), out);
    return 0;
}

int cmd_metrics(const CliOptions& opt, std::ostream& out) {
    const auto cfg = parse_metric_config(load_config(opt));
    write_output(opt.report_path, evaluate_metric(cfg).dump(2) + "\n", out);
    return 0;
}

int cmd_validate_metric(const CliOptions& opt, std::ostream& out) {
    const auto record = parse_record_config(load_config(opt));
    const auto quality = scorecard::validate_metric_record(record);
    write_output(opt.report_path, to_json(quality).dump(2) + "\n", out);
    return 0;
}

int cmd_check(const CliOptions& opt, std::ostream& out) {
    const auto cfg = parse_simulate_config(load_config(opt));
    const Network net = build_network(cfg.network, cfg.seed);
    const auto violations = validate_network(net);
    write_output(opt.report_path, to_json(violations).dump(2) + "\n", out);
    return violations.empty() ? 0 : 2;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"resilience simulation and security scorecards for layered "
                 "dependency networks",
                 "resilnet"};
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*handler)(const CliOptions&, std::ostream&);
    };
    static constexpr Command commands[] = {
        {"simulate", "Monte Carlo resilience estimate for one configuration",
         cmd_simulate},
        {"sweep", "parameter sweep over p_m, p_s and T_R grids", cmd_sweep},
        {"exact", "exact enumeration of switch outcomes for explicit events",
         cmd_exact},
        {"score", "score a stage-by-domain assessment matrix", cmd_score},
        {"gap", "current vs target gap analysis", cmd_gap},
        {"rank-assets", "rank assets by composite loss/threat priority",
         cmd_rank_assets},
        {"metrics", "evaluate one formula metric", cmd_metrics},
        {"validate-metric", "quality-check a metric record",
         cmd_validate_metric},
        {"check", "validate a network configuration", cmd_check},
    };

    CliOptions options;
    for (const auto& c : commands)
        add_common_options(app.add_subcommand(c.name, c.help), options);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("resilnet");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        for (const auto& c : commands)
            if (app.get_subcommand(c.name)->parsed())
                return c.handler(options, out);
        err << "usage error: no command given\n";
        return 1;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const LimitError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace resilnet
