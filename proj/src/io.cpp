#include "resilnet/io.hpp"

#include "resilnet/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <span>
#include <set>
#include <sstream>

namespace resilnet {

using nlohmann::json;

namespace {

// ---- strict-schema plumbing ------------------------------------------

struct Ctx {
    std::vector<std::string> issues;

    void add(const std::string& path, const std::string& msg) {
        issues.push_back(path + ": " + msg);
    }
    void finish() const {
        if (issues.empty()) return;
        std::string joined;
        for (std::size_t i = 0; i < issues.size(); ++i) {
            if (i) joined += '\n';
            joined += issues[i];
        }
        throw InputError(joined);
    }
};

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string elem(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void expect_keys(Ctx& ctx, const json& j, const std::string& path,
                 std::span<const std::string_view> allowed) {
    if (!j.is_object()) {
        ctx.add(path.empty() ? "config" : path, "expected an object");
        return;
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const auto a : allowed)
            if (item.key() == a) {
                known = true;
                break;
            }
        if (!known) ctx.add(child(path, item.key()), "unknown field");
    }
}

void expect_keys(Ctx& ctx, const json& j, const std::string& path,
                 std::initializer_list<std::string_view> allowed) {
    expect_keys(ctx, j, path,
                std::span<const std::string_view>(allowed.begin(),
                                                  allowed.size()));
}

const json* member(const json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::optional<double> as_number(Ctx& ctx, const json& j,
                                const std::string& path) {
    if (!j.is_number()) {
        ctx.add(path, "expected a number");
        return std::nullopt;
    }
    return j.get<double>();
}

std::optional<std::uint64_t> as_uint(Ctx& ctx, const json& j,
                                     const std::string& path) {
    if (!j.is_number_unsigned()) {
        ctx.add(path, "expected a non-negative integer");
        return std::nullopt;
    }
    return j.get<std::uint64_t>();
}

std::optional<std::string> as_string(Ctx& ctx, const json& j,
                                     const std::string& path) {
    if (!j.is_string()) {
        ctx.add(path, "expected a string");
        return std::nullopt;
    }
    return j.get<std::string>();
}

std::optional<double> unit_interval(Ctx& ctx, const json& j,
                                    const std::string& path) {
    const auto v = as_number(ctx, j, path);
    if (v && !(*v >= 0.0 && *v <= 1.0)) {
        ctx.add(path, "out of range [0,1]");
        return std::nullopt;
    }
    return v;
}

void check_version(Ctx& ctx, const json& doc) {
    const json* v = member(doc, "version");
    if (!v) {
        ctx.add("version", "missing required field");
        return;
    }
    if (!v->is_number_unsigned() || v->get<std::uint64_t>() != 1)
        ctx.add("version", "unsupported schema version (expected 1)");
}

std::optional<NodeId> parse_node(Ctx& ctx, const json& j,
                                 const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
        !j[1].is_number_unsigned()) {
        ctx.add(path, "expected a [level, ordinal] pair");
        return std::nullopt;
    }
    NodeId id{j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
    if (id.level < 1) {
        ctx.add(path, "level must be >= 1");
        return std::nullopt;
    }
    return id;
}

// ---- network / experiment configs ------------------------------------

NetworkSpec parse_network(Ctx& ctx, const json& j, const std::string& path) {
    NetworkSpec spec;
    expect_keys(ctx, j, path,
                {"levels", "required_levels", "params", "links"});
    if (!j.is_object()) return spec;

    if (const json* levels = member(j, "levels")) {
        if (!levels->is_array() || levels->empty()) {
            ctx.add(child(path, "levels"),
                    "expected a non-empty array of node counts");
        } else {
            for (std::size_t i = 0; i < levels->size(); ++i) {
                const json& c = (*levels)[i];
                if (!c.is_number_unsigned() || c.get<std::uint64_t>() < 1)
                    ctx.add(elem(child(path, "levels"), i),
                            "node count must be a positive integer");
                else
                    spec.level_counts.push_back(c.get<std::uint32_t>());
            }
        }
    } else {
        ctx.add(child(path, "levels"), "missing required field");
    }
    const auto level_count =
        static_cast<std::uint32_t>(spec.level_counts.size());

    if (const json* req = member(j, "required_levels")) {
        const auto rpath = child(path, "required_levels");
        if (!req->is_object()) {
            ctx.add(rpath, "expected an object keyed by level");
        } else {
            for (const auto& item : req->items()) {
                std::uint32_t lvl = 0;
                const auto& key = item.key();
                const auto res = std::from_chars(
                    key.data(), key.data() + key.size(), lvl);
                if (res.ec != std::errc() ||
                    res.ptr != key.data() + key.size() || lvl < 2 ||
                    lvl > level_count) {
                    ctx.add(child(rpath, key),
                            "key must be a level in [2, " +
                                std::to_string(level_count) + "]");
                    continue;
                }
                if (!item.value().is_array()) {
                    ctx.add(child(rpath, key), "expected an array of levels");
                    continue;
                }
                std::vector<std::uint32_t> uppers;
                std::set<std::uint32_t> seen;
                for (std::size_t i = 0; i < item.value().size(); ++i) {
                    const json& u = item.value()[i];
                    const auto upath = elem(child(rpath, key), i);
                    if (!u.is_number_unsigned()) {
                        ctx.add(upath, "expected a level number");
                        continue;
                    }
                    const auto uv = u.get<std::uint32_t>();
                    if (uv < 1 || uv >= lvl)
                        ctx.add(upath, "must be strictly above level " + key);
                    else if (!seen.insert(uv).second)
                        ctx.add(upath, "duplicate level");
                    else
                        uppers.push_back(uv);
                }
                spec.required_levels[lvl] = std::move(uppers);
            }
        }
    }
    // resolve defaults so the canonical form and digest are complete
    for (std::uint32_t lvl = 2; lvl <= level_count; ++lvl)
        if (!spec.required_levels.count(lvl)) {
            auto& v = spec.required_levels[lvl];
            for (std::uint32_t u = 1; u < lvl; ++u) v.push_back(u);
        }

    if (const json* params = member(j, "params")) {
        const auto ppath = child(path, "params");
        expect_keys(ctx, *params, ppath, {"p_m", "p_s", "t_r"});
        if (params->is_object()) {
            if (const json* v = member(*params, "p_m")) {
                if (const auto x = unit_interval(ctx, *v, child(ppath, "p_m")))
                    spec.params.p_m = *x;
            } else {
                ctx.add(child(ppath, "p_m"), "missing required field");
            }
            if (const json* v = member(*params, "p_s")) {
                if (const auto x = unit_interval(ctx, *v, child(ppath, "p_s")))
                    spec.params.p_s = *x;
            } else {
                ctx.add(child(ppath, "p_s"), "missing required field");
            }
            if (const json* v = member(*params, "t_r")) {
                if (const auto x = as_uint(ctx, *v, child(ppath, "t_r")))
                    spec.params.t_r = static_cast<std::uint32_t>(*x);
            } else {
                ctx.add(child(ppath, "t_r"), "missing required field");
            }
        }
    } else {
        ctx.add(child(path, "params"), "missing required field");
    }

    if (const json* links = member(j, "links")) {
        const auto lpath = child(path, "links");
        if (!links->is_array()) {
            ctx.add(lpath, "expected an array of links");
        } else {
            std::vector<SupplyLink> list;
            for (std::size_t i = 0; i < links->size(); ++i) {
                const json& l = (*links)[i];
                const auto ipath = elem(lpath, i);
                expect_keys(ctx, l, ipath, {"source", "target", "status"});
                if (!l.is_object()) continue;
                SupplyLink link;
                bool ok = true;
                if (const json* s = member(l, "source")) {
                    if (const auto id =
                            parse_node(ctx, *s, child(ipath, "source")))
                        link.source = *id;
                    else
                        ok = false;
                } else {
                    ctx.add(child(ipath, "source"), "missing required field");
                    ok = false;
                }
                if (const json* t = member(l, "target")) {
                    if (const auto id =
                            parse_node(ctx, *t, child(ipath, "target")))
                        link.target = *id;
                    else
                        ok = false;
                } else {
                    ctx.add(child(ipath, "target"), "missing required field");
                    ok = false;
                }
                if (const json* st = member(l, "status")) {
                    const auto s = as_string(ctx, *st, child(ipath, "status"));
                    if (s && *s == "active")
                        link.status = LinkStatus::Active;
                    else if (s && *s == "potential")
                        link.status = LinkStatus::Potential;
                    else if (s) {
                        ctx.add(child(ipath, "status"),
                                "expected \"active\" or \"potential\"");
                        ok = false;
                    }
                } else {
                    ctx.add(child(ipath, "status"), "missing required field");
                    ok = false;
                }
                if (ok) list.push_back(link);
            }
            spec.explicit_links = std::move(list);
        }
    }
    return spec;
}

EventModel parse_event_model(Ctx& ctx, const json& j,
                             const std::string& path) {
    EventModel model;
    const json* kind = member(j, "kind");
    const auto kind_str =
        kind ? as_string(ctx, *kind, child(path, "kind")) : std::nullopt;
    if (!kind) {
        ctx.add(child(path, "kind"), "missing required field");
        expect_keys(ctx, j, path, {"kind"});
        return model;
    }
    if (!kind_str) return model;

    if (*kind_str == "random_fraction") {
        expect_keys(ctx, j, path, {"kind", "d"});
        model.kind = EventKind::RandomFraction;
        if (const json* d = member(j, "d")) {
            if (const auto x = unit_interval(ctx, *d, child(path, "d")))
                model.fraction = *x;
        }
    } else if (*kind_str == "fixed_count") {
        expect_keys(ctx, j, path, {"kind", "k"});
        model.kind = EventKind::FixedCount;
        if (const json* k = member(j, "k")) {
            if (const auto x = as_uint(ctx, *k, child(path, "k")))
                model.count = *x;
        } else {
            ctx.add(child(path, "k"), "missing required field");
        }
    } else if (*kind_str == "explicit") {
        expect_keys(ctx, j, path, {"kind", "events"});
        model.kind = EventKind::Explicit;
        const json* events = member(j, "events");
        if (!events) {
            ctx.add(child(path, "events"), "missing required field");
        } else if (!events->is_array() || events->empty()) {
            ctx.add(child(path, "events"),
                    "expected a non-empty array of node sets");
        } else {
            for (std::size_t i = 0; i < events->size(); ++i) {
                const json& ev = (*events)[i];
                const auto epath = elem(child(path, "events"), i);
                if (!ev.is_array()) {
                    ctx.add(epath, "expected an array of nodes");
                    continue;
                }
                std::vector<NodeId> nodes;
                for (std::size_t n = 0; n < ev.size(); ++n)
                    if (const auto id = parse_node(ctx, ev[n], elem(epath, n)))
                        nodes.push_back(*id);
                model.events.push_back(std::move(nodes));
            }
        }
    } else {
        ctx.add(child(path, "kind"), "unknown kind '" + *kind_str + "'");
    }
    return model;
}

CfSpec parse_cf(Ctx& ctx, const json& j, const std::string& path) {
    CfSpec cf;
    const json* mode = member(j, "mode");
    const auto mode_str =
        mode ? as_string(ctx, *mode, child(path, "mode")) : std::nullopt;
    if (!mode) {
        ctx.add(child(path, "mode"), "missing required field");
        expect_keys(ctx, j, path, {"mode"});
        return cf;
    }
    if (!mode_str) return cf;

    if (*mode_str == "fraction_all") {
        expect_keys(ctx, j, path, {"mode"});
        cf.mode = CfMode::FractionAll;
    } else if (*mode_str == "fraction_bottom") {
        expect_keys(ctx, j, path, {"mode"});
        cf.mode = CfMode::FractionBottom;
    } else if (*mode_str == "weighted") {
        expect_keys(ctx, j, path, {"mode", "weights"});
        cf.mode = CfMode::Weighted;
        const json* weights = member(j, "weights");
        if (!weights) {
            ctx.add(child(path, "weights"), "missing required field");
        } else if (!weights->is_array()) {
            ctx.add(child(path, "weights"),
                    "expected an array of per-level weight lists");
        } else {
            for (std::size_t lvl = 0; lvl < weights->size(); ++lvl) {
                const json& wl = (*weights)[lvl];
                const auto wpath = elem(child(path, "weights"), lvl);
                std::vector<double> row;
                if (!wl.is_array()) {
                    ctx.add(wpath, "expected an array of weights");
                } else {
                    for (std::size_t i = 0; i < wl.size(); ++i) {
                        const auto v =
                            as_number(ctx, wl[i], elem(wpath, i));
                        if (v && *v < 0.0)
                            ctx.add(elem(wpath, i),
                                    "weights must be non-negative");
                        else if (v)
                            row.push_back(*v);
                    }
                }
                cf.weights.push_back(std::move(row));
            }
        }
    } else {
        ctx.add(child(path, "mode"), "unknown mode '" + *mode_str + "'");
    }
    return cf;
}

ExperimentConfig parse_experiment(Ctx& ctx, const json& doc,
                                  std::span<const std::string_view> allowed) {
    ExperimentConfig cfg;
    expect_keys(ctx, doc, "", allowed);
    if (!doc.is_object()) return cfg;
    check_version(ctx, doc);

    if (const json* net = member(doc, "network"))
        cfg.network = parse_network(ctx, *net, "network");
    else
        ctx.add("network", "missing required field");

    if (const json* ev = member(doc, "event_model"))
        cfg.event_model = parse_event_model(ctx, *ev, "event_model");

    if (const json* steps = member(doc, "steps")) {
        if (const auto x = as_uint(ctx, *steps, "steps")) {
            if (*x < 1)
                ctx.add("steps", "must be >= 1");
            else
                cfg.steps = static_cast<std::uint32_t>(*x);
        }
    }
    if (const json* cf = member(doc, "cf")) cfg.cf = parse_cf(ctx, *cf, "cf");
    if (const json* runs = member(doc, "runs")) {
        if (const auto x = as_uint(ctx, *runs, "runs")) {
            if (*x < 1)
                ctx.add("runs", "must be >= 1");
            else
                cfg.runs = *x;
        }
    }
    if (const json* seed = member(doc, "seed"))
        if (const auto x = as_uint(ctx, *seed, "seed")) cfg.seed = *x;
    return cfg;
}

constexpr std::array<std::string_view, 7> simulate_keys = {
    "version", "network", "event_model", "steps", "cf", "runs", "seed"};
constexpr std::array<std::string_view, 8> sweep_keys = {
    "version", "network", "event_model", "steps", "cf",
    "runs",    "seed",    "sweep"};
constexpr std::array<std::string_view, 8> exact_keys = {
    "version", "network", "event_model", "steps",
    "cf",      "runs",    "seed",        "max_outcomes"};

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot read file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config: " + std::string(e.what()));
    }
}

ExperimentConfig parse_simulate_config(const json& doc) {
    Ctx ctx;
    auto cfg = parse_experiment(ctx, doc, simulate_keys);
    ctx.finish();
    return cfg;
}

SweepGrid parse_sweep_config(const json& doc) {
    Ctx ctx;
    SweepGrid grid;
    grid.base = parse_experiment(ctx, doc, sweep_keys);
    grid.p_m = {grid.base.network.params.p_m};
    grid.p_s = {grid.base.network.params.p_s};
    grid.t_r = {grid.base.network.params.t_r};

    if (const json* sweep = member(doc, "sweep")) {
        expect_keys(ctx, *sweep, "sweep", {"p_m", "p_s", "t_r"});
        if (sweep->is_object()) {
            const auto load_probs = [&](const char* key,
                                        std::vector<double>& out) {
                const json* axis = member(*sweep, key);
                if (!axis) return;
                const auto apath = child("sweep", key);
                if (!axis->is_array() || axis->empty()) {
                    ctx.add(apath, "expected a non-empty array");
                    return;
                }
                out.clear();
                for (std::size_t i = 0; i < axis->size(); ++i)
                    if (const auto v =
                            unit_interval(ctx, (*axis)[i], elem(apath, i)))
                        out.push_back(*v);
            };
            load_probs("p_m", grid.p_m);
            load_probs("p_s", grid.p_s);
            if (const json* axis = member(*sweep, "t_r")) {
                const auto apath = child("sweep", "t_r");
                if (!axis->is_array() || axis->empty()) {
                    ctx.add(apath, "expected a non-empty array");
                } else {
                    grid.t_r.clear();
                    for (std::size_t i = 0; i < axis->size(); ++i)
                        if (const auto v =
                                as_uint(ctx, (*axis)[i], elem(apath, i)))
                            grid.t_r.push_back(
                                static_cast<std::uint32_t>(*v));
                }
            }
        }
    }
    ctx.finish();
    return grid;
}

ExactConfig parse_exact_config(const json& doc) {
    Ctx ctx;
    ExactConfig cfg;
    cfg.experiment = parse_experiment(ctx, doc, exact_keys);
    if (const json* mo = member(doc, "max_outcomes")) {
        if (const auto x = as_uint(ctx, *mo, "max_outcomes")) {
            if (*x < 1)
                ctx.add("max_outcomes", "must be >= 1");
            else
                cfg.options.max_outcomes = *x;
        }
    }
    if (ctx.issues.empty() &&
        cfg.experiment.event_model.kind != EventKind::Explicit)
        ctx.add("event_model.kind", "exact requires an explicit event list");
    ctx.finish();
    return cfg;
}

// ---- scorecard configs ------------------------------------------------

namespace {

std::optional<scorecard::Stage> parse_stage(Ctx& ctx, const json& j,
                                            const std::string& path) {
    const auto s = as_string(ctx, j, path);
    if (!s) return std::nullopt;
    for (const auto stage : scorecard::all_stages)
        if (*s == scorecard::to_string(stage)) return stage;
    ctx.add(path, "unknown stage '" + *s + "'");
    return std::nullopt;
}

std::optional<scorecard::Domain> parse_domain(Ctx& ctx, const json& j,
                                              const std::string& path) {
    const auto s = as_string(ctx, j, path);
    if (!s) return std::nullopt;
    for (const auto domain : scorecard::all_domains)
        if (*s == scorecard::to_string(domain)) return domain;
    ctx.add(path, "unknown domain '" + *s + "'");
    return std::nullopt;
}

std::optional<scorecard::Rating> parse_rating(Ctx& ctx, const json& j,
                                              const std::string& path) {
    const auto s = as_string(ctx, j, path);
    if (!s) return std::nullopt;
    if (*s == "low") return scorecard::Rating::Low;
    if (*s == "moderate") return scorecard::Rating::Moderate;
    if (*s == "high") return scorecard::Rating::High;
    ctx.add(path, "expected \"low\", \"moderate\" or \"high\"");
    return std::nullopt;
}

scorecard::MatrixAssessment parse_assessment(Ctx& ctx, const json& j,
                                             const std::string& path,
                                             scorecard::AssessmentRole role) {
    scorecard::MatrixAssessment a;
    a.role = role;
    expect_keys(ctx, j, path, {"role", "cells"});
    if (!j.is_object()) return a;

    if (const json* r = member(j, "role")) {
        const auto s = as_string(ctx, *r, child(path, "role"));
        if (s && *s == "current")
            a.role = scorecard::AssessmentRole::Current;
        else if (s && *s == "target")
            a.role = scorecard::AssessmentRole::Target;
        else if (s)
            ctx.add(child(path, "role"),
                    "expected \"current\" or \"target\"");
    }

    const json* cells = member(j, "cells");
    if (!cells) {
        ctx.add(child(path, "cells"), "missing required field");
        return a;
    }
    if (!cells->is_array()) {
        ctx.add(child(path, "cells"), "expected an array of cells");
        return a;
    }
    std::set<std::pair<scorecard::Stage, scorecard::Domain>> seen;
    for (std::size_t i = 0; i < cells->size(); ++i) {
        const json& c = (*cells)[i];
        const auto cpath = elem(child(path, "cells"), i);
        expect_keys(ctx, c, cpath, {"stage", "domain", "entries"});
        if (!c.is_object()) continue;
        scorecard::MatrixCell cell;
        bool ok = true;
        if (const json* s = member(c, "stage")) {
            if (const auto v = parse_stage(ctx, *s, child(cpath, "stage")))
                cell.stage = *v;
            else
                ok = false;
        } else {
            ctx.add(child(cpath, "stage"), "missing required field");
            ok = false;
        }
        if (const json* d = member(c, "domain")) {
            if (const auto v = parse_domain(ctx, *d, child(cpath, "domain")))
                cell.domain = *v;
            else
                ok = false;
        } else {
            ctx.add(child(cpath, "domain"), "missing required field");
            ok = false;
        }
        if (ok && !seen.insert({cell.stage, cell.domain}).second)
            ctx.add(cpath, "duplicate cell " +
                               scorecard::to_string(cell.stage) + "/" +
                               scorecard::to_string(cell.domain));
        if (const json* entries = member(c, "entries")) {
            const auto epath = child(cpath, "entries");
            if (!entries->is_array()) {
                ctx.add(epath, "expected an array of entries");
            } else {
                for (std::size_t e = 0; e < entries->size(); ++e) {
                    const json& ej = (*entries)[e];
                    const auto entry_path = elem(epath, e);
                    expect_keys(ctx, ej, entry_path,
                                {"id", "description", "score", "weight"});
                    if (!ej.is_object()) continue;
                    scorecard::MetricEntry entry;
                    if (const json* id = member(ej, "id")) {
                        if (const auto v =
                                as_string(ctx, *id, child(entry_path, "id")))
                            entry.id = *v;
                    } else {
                        ctx.add(child(entry_path, "id"),
                                "missing required field");
                    }
                    if (const json* d = member(ej, "description"))
                        if (const auto v = as_string(
                                ctx, *d, child(entry_path, "description")))
                            entry.description = *v;
                    if (const json* s = member(ej, "score"))
                        if (const auto v = unit_interval(
                                ctx, *s, child(entry_path, "score")))
                            entry.score = *v;
                    if (const json* w = member(ej, "weight")) {
                        const auto v =
                            as_number(ctx, *w, child(entry_path, "weight"));
                        if (v && *v < 0.0)
                            ctx.add(child(entry_path, "weight"),
                                    "negative weight");
                        else if (v)
                            entry.weight = *v;
                    }
                    cell.entries.push_back(std::move(entry));
                }
            }
        } else {
            ctx.add(child(cpath, "entries"), "missing required field");
        }
        a.cells.push_back(std::move(cell));
    }
    return a;
}

} // namespace

ScoreConfig parse_score_config(const json& doc) {
    Ctx ctx;
    ScoreConfig cfg;
    expect_keys(ctx, doc, "", {"version", "assessment", "cell_weights"});
    check_version(ctx, doc);
    if (const json* a = member(doc, "assessment"))
        cfg.assessment = parse_assessment(ctx, *a, "assessment",
                                          scorecard::AssessmentRole::Current);
    else
        ctx.add("assessment", "missing required field");

    if (const json* cw = member(doc, "cell_weights")) {
        if (!cw->is_array()) {
            ctx.add("cell_weights", "expected an array");
        } else {
            for (std::size_t i = 0; i < cw->size(); ++i) {
                const json& w = (*cw)[i];
                const auto wpath = elem("cell_weights", i);
                expect_keys(ctx, w, wpath, {"stage", "domain", "weight"});
                if (!w.is_object()) continue;
                scorecard::CellWeight cell;
                if (const json* s = member(w, "stage")) {
                    if (const auto v =
                            parse_stage(ctx, *s, child(wpath, "stage")))
                        cell.stage = *v;
                } else {
                    ctx.add(child(wpath, "stage"), "missing required field");
                }
                if (const json* d = member(w, "domain")) {
                    if (const auto v =
                            parse_domain(ctx, *d, child(wpath, "domain")))
                        cell.domain = *v;
                } else {
                    ctx.add(child(wpath, "domain"), "missing required field");
                }
                if (const json* v = member(w, "weight")) {
                    const auto x =
                        as_number(ctx, *v, child(wpath, "weight"));
                    if (x && *x < 0.0)
                        ctx.add(child(wpath, "weight"), "negative weight");
                    else if (x)
                        cell.weight = *x;
                } else {
                    ctx.add(child(wpath, "weight"), "missing required field");
                }
                cfg.cell_weights.push_back(cell);
            }
        }
    }
    ctx.finish();
    return cfg;
}

GapConfig parse_gap_config(const json& doc) {
    Ctx ctx;
    GapConfig cfg;
    expect_keys(ctx, doc, "", {"version", "current", "target"});
    check_version(ctx, doc);
    if (const json* c = member(doc, "current"))
        cfg.current = parse_assessment(ctx, *c, "current",
                                       scorecard::AssessmentRole::Current);
    else
        ctx.add("current", "missing required field");
    if (const json* t = member(doc, "target"))
        cfg.target = parse_assessment(ctx, *t, "target",
                                      scorecard::AssessmentRole::Target);
    else
        ctx.add("target", "missing required field");
    ctx.finish();
    return cfg;
}

std::vector<scorecard::Asset> parse_assets_config(const json& doc) {
    Ctx ctx;
    std::vector<scorecard::Asset> assets;
    expect_keys(ctx, doc, "", {"version", "assets"});
    check_version(ctx, doc);
    const json* list = member(doc, "assets");
    if (!list) {
        ctx.add("assets", "missing required field");
        ctx.finish();
        return assets;
    }
    if (!list->is_array()) {
        ctx.add("assets", "expected an array");
        ctx.finish();
        return assets;
    }
    for (std::size_t i = 0; i < list->size(); ++i) {
        const json& a = (*list)[i];
        const auto apath = elem("assets", i);
        expect_keys(ctx, a, apath, {"name", "loss", "threat"});
        if (!a.is_object()) continue;
        scorecard::Asset asset;
        if (const json* n = member(a, "name")) {
            if (const auto v = as_string(ctx, *n, child(apath, "name")))
                asset.name = *v;
        } else {
            ctx.add(child(apath, "name"), "missing required field");
        }
        if (const json* loss = member(a, "loss")) {
            const auto lpath = child(apath, "loss");
            expect_keys(ctx, *loss, lpath,
                        {"confidentiality", "integrity", "availability"});
            const auto load = [&](const char* key, scorecard::Rating& out) {
                if (const json* r = member(*loss, key)) {
                    if (const auto v =
                            parse_rating(ctx, *r, child(lpath, key)))
                        out = *v;
                } else {
                    ctx.add(child(lpath, key), "missing required field");
                }
            };
            if (loss->is_object()) {
                load("confidentiality", asset.loss.confidentiality);
                load("integrity", asset.loss.integrity);
                load("availability", asset.loss.availability);
            }
        } else {
            ctx.add(child(apath, "loss"), "missing required field");
        }
        if (const json* t = member(a, "threat")) {
            if (const auto v = parse_rating(ctx, *t, child(apath, "threat")))
                asset.threat = *v;
        } else {
            ctx.add(child(apath, "threat"), "missing required field");
        }
        assets.push_back(std::move(asset));
    }
    ctx.finish();
    return assets;
}

MetricConfig parse_metric_config(const json& doc) {
    Ctx ctx;
    MetricConfig cfg;
    const json* metric = member(doc, "metric");
    const auto name =
        metric ? as_string(ctx, *metric, "metric") : std::nullopt;
    if (!metric) ctx.add("metric", "missing required field");
    if (name) cfg.metric = *name;

    struct Shape {
        std::string_view metric;
        std::string_view input;
        enum { Numbers, Vulns, Names } kind;
    };
    static constexpr Shape shapes[] = {
        {"mttid", "delays", Shape::Numbers},
        {"mtbsi", "timestamps", Shape::Numbers},
        {"mttir", "durations", Shape::Numbers},
        {"cost_of_incidents", "costs", Shape::Numbers},
        {"vulnerability_exposure", "vulnerabilities", Shape::Vulns},
        {"rogue_change_days", "undetected_days", Shape::Numbers},
        {"root_privilege_count", "personnel", Shape::Names},
        {"component_test_count", "untested_components", Shape::Names},
    };
    const Shape* shape = nullptr;
    if (name) {
        for (const auto& s : shapes)
            if (s.metric == *name) shape = &s;
        if (!shape) ctx.add("metric", "unknown metric '" + *name + "'");
    }
    if (!shape) {
        expect_keys(ctx, doc, "", {"version", "metric"});
        ctx.finish();
        return cfg;
    }

    const std::string input(shape->input);
    expect_keys(ctx, doc, "", {"version", "metric", shape->input});
    check_version(ctx, doc);
    const json* values = member(doc, input.c_str());
    if (!values) {
        ctx.add(input, "missing required field");
        ctx.finish();
        return cfg;
    }
    if (!values->is_array()) {
        ctx.add(input, "expected an array");
        ctx.finish();
        return cfg;
    }
    for (std::size_t i = 0; i < values->size(); ++i) {
        const json& v = (*values)[i];
        const auto vpath = elem(input, i);
        switch (shape->kind) {
        case Shape::Numbers:
            if (const auto x = as_number(ctx, v, vpath))
                cfg.numbers.push_back(*x);
            break;
        case Shape::Names:
            if (const auto x = as_string(ctx, v, vpath))
                cfg.names.push_back(*x);
            break;
        case Shape::Vulns: {
            expect_keys(ctx, v, vpath, {"id", "exposure_days"});
            if (!v.is_object()) break;
            scorecard::VulnExposure vx;
            if (const json* id = member(v, "id")) {
                if (const auto s = as_string(ctx, *id, child(vpath, "id")))
                    vx.id = *s;
            } else {
                ctx.add(child(vpath, "id"), "missing required field");
            }
            if (const json* d = member(v, "exposure_days")) {
                if (const auto x =
                        as_number(ctx, *d, child(vpath, "exposure_days")))
                    vx.exposure_days = *x;
            } else {
                ctx.add(child(vpath, "exposure_days"),
                        "missing required field");
            }
            cfg.vulns.push_back(std::move(vx));
            break;
        }
        }
    }
    ctx.finish();
    return cfg;
}

nlohmann::json evaluate_metric(const MetricConfig& cfg) {
    using namespace scorecard;
    json out;
    out["metric"] = cfg.metric;
    if (cfg.metric == "mttid")
        out["value"] = mttid(cfg.numbers);
    else if (cfg.metric == "mtbsi")
        out["value"] = mtbsi(cfg.numbers);
    else if (cfg.metric == "mttir")
        out["value"] = mttir(cfg.numbers);
    else if (cfg.metric == "cost_of_incidents")
        out["value"] = cost_of_incidents(cfg.numbers);
    else if (cfg.metric == "vulnerability_exposure")
        out["value"] = vulnerability_exposure(cfg.vulns);
    else if (cfg.metric == "rogue_change_days")
        out["value"] = rogue_change_days(cfg.numbers);
    else if (cfg.metric == "root_privilege_count")
        out["value"] = root_privilege_count(cfg.names);
    else if (cfg.metric == "component_test_count")
        out["value"] = component_test_count(cfg.names);
    else
        throw InputError("metric: unknown metric '" + cfg.metric + "'");
    return out;
}

scorecard::MetricRecord parse_record_config(const json& doc) {
    Ctx ctx;
    scorecard::MetricRecord record;
    expect_keys(ctx, doc, "", {"version", "record"});
    check_version(ctx, doc);
    const json* r = member(doc, "record");
    if (!r) {
        ctx.add("record", "missing required field");
        ctx.finish();
        return record;
    }
    expect_keys(ctx, *r, "record",
                {"title", "purpose", "relates_to", "formula",
                 "collection_frequency", "who_measures", "who_acts",
                 "what_they_do", "data_source"});
    const auto load = [&](const char* key, std::string& out) {
        if (const json* v = member(*r, key))
            if (const auto s = as_string(ctx, *v, child("record", key)))
                out = *s;
    };
    if (r->is_object()) {
        load("title", record.title);
        load("purpose", record.purpose);
        load("relates_to", record.relates_to);
        load("formula", record.formula);
        load("collection_frequency", record.collection_frequency);
        load("who_measures", record.who_measures);
        load("who_acts", record.who_acts);
        load("what_they_do", record.what_they_do);
        load("data_source", record.data_source);
    }
    ctx.finish();
    return record;
}

// ---- canonical serialization and digest --------------------------------

namespace {

json node_json(const NodeId& id) { return json::array({id.level, id.ordinal}); }

json links_json(const std::vector<SupplyLink>& links) {
    json out = json::array();
    for (const auto& l : links)
        out.push_back({{"source", node_json(l.source)},
                       {"target", node_json(l.target)},
                       {"status", l.status == LinkStatus::Active
                                      ? "active"
                                      : "potential"}});
    return out;
}

json network_spec_json(const NetworkSpec& spec) {
    json net;
    net["levels"] = spec.level_counts;
    json req = json::object();
    const auto level_count =
        static_cast<std::uint32_t>(spec.level_counts.size());
    for (std::uint32_t lvl = 2; lvl <= level_count; ++lvl) {
        const auto it = spec.required_levels.find(lvl);
        if (it != spec.required_levels.end()) {
            req[std::to_string(lvl)] = it->second;
        } else {
            std::vector<std::uint32_t> all;
            for (std::uint32_t u = 1; u < lvl; ++u) all.push_back(u);
            req[std::to_string(lvl)] = all;
        }
    }
    net["required_levels"] = req;
    net["params"] = {{"p_m", spec.params.p_m},
                     {"p_s", spec.params.p_s},
                     {"t_r", spec.params.t_r}};
    if (spec.explicit_links) net["links"] = links_json(*spec.explicit_links);
    return net;
}

json event_model_json(const EventModel& model) {
    json out;
    switch (model.kind) {
    case EventKind::RandomFraction:
        out["kind"] = "random_fraction";
        out["d"] = model.fraction;
        break;
    case EventKind::FixedCount:
        out["kind"] = "fixed_count";
        out["k"] = model.count;
        break;
    case EventKind::Explicit: {
        out["kind"] = "explicit";
        json events = json::array();
        for (const auto& ev : model.events) {
            json nodes = json::array();
            for (const auto& id : ev) nodes.push_back(node_json(id));
            events.push_back(nodes);
        }
        out["events"] = events;
        break;
    }
    }
    return out;
}

json cf_json(const CfSpec& cf) {
    json out;
    switch (cf.mode) {
    case CfMode::FractionAll: out["mode"] = "fraction_all"; break;
    case CfMode::FractionBottom: out["mode"] = "fraction_bottom"; break;
    case CfMode::Weighted:
        out["mode"] = "weighted";
        out["weights"] = cf.weights;
        break;
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["version"] = 1;
    j["network"] = network_spec_json(cfg.network);
    j["event_model"] = event_model_json(cfg.event_model);
    j["steps"] = cfg.steps;
    j["cf"] = cf_json(cfg.cf);
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    return j;
}

std::string config_digest(const ExperimentConfig& cfg) {
    return hex64(fnv1a64(to_json(cfg).dump()));
}

json to_json(const Network& net) {
    NetworkSpec spec;
    spec.level_counts = net.level_counts;
    for (std::uint32_t lvl = 2; lvl <= net.level_count(); ++lvl)
        spec.required_levels[lvl] = net.required[lvl - 1];
    spec.params = net.params;
    json j = network_spec_json(spec);
    j["links"] = links_json(net.links);
    return j;
}

// ---- emitters -----------------------------------------------------------

std::string format_double(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string emit_profile_csv(const ResilienceProfile& profile) {
    std::string out = "t_norm,cf_mean,cf_std,n_runs\n";
    for (std::size_t i = 0; i < profile.mean_cf.size(); ++i) {
        out += format_double(profile.t_norm(i));
        out += ',';
        out += format_double(profile.mean_cf[i]);
        out += ',';
        out += format_double(profile.std_cf[i]);
        out += ',';
        out += std::to_string(profile.runs);
        out += '\n';
    }
    return out;
}

std::string emit_report_json(const ResilienceReport& report) {
    json j;
    j["resilience"] = report.resilience;
    j["robustness"] = report.robustness;
    j["risk"] = report.risk;
    j["runs"] = report.runs;
    j["seed"] = report.seed;
    j["config_digest"] = report.config_digest;
    return j.dump(2) + "\n";
}

std::string emit_sweep_csv(const SweepTable& table) {
    std::string out = "p_m,p_s,t_r,resilience,robustness,risk,runs\n";
    for (const auto& row : table.rows) {
        out += format_double(row.p_m);
        out += ',';
        out += format_double(row.p_s);
        out += ',';
        out += std::to_string(row.t_r);
        out += ',';
        out += format_double(row.resilience);
        out += ',';
        out += format_double(row.robustness);
        out += ',';
        out += format_double(row.risk);
        out += ',';
        out += std::to_string(row.runs);
        out += '\n';
    }
    return out;
}

namespace {

std::string fixed2(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, 2);
    return std::string(buf.data(), res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string emit_plot_svg(const ResilienceProfile& profile) {
    constexpr double width = 640, height = 420;
    constexpr double ml = 60, mr = 20, mt = 20, mb = 50;
    const auto px = [&](double t) { return ml + t * (width - ml - mr); };
    const auto py = [&](double v) { return mt + (1.0 - v) * (height - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    // shaded area under the mean-CF curve = resilience
    svg << "  <polygon fill=\"#f2c14e\" fill-opacity=\"0.75\" stroke=\"none\" "
           "points=\"";
    svg << fixed2(px(0.0)) << "," << fixed2(py(0.0));
    for (std::size_t i = 0; i < profile.mean_cf.size(); ++i)
        svg << " " << fixed2(px(profile.t_norm(i))) << ","
            << fixed2(py(profile.mean_cf[i]));
    svg << " " << fixed2(px(1.0)) << "," << fixed2(py(0.0)) << "\"/>\n";

    svg << "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" "
           "points=\"";
    for (std::size_t i = 0; i < profile.mean_cf.size(); ++i) {
        if (i) svg << " ";
        svg << fixed2(px(profile.t_norm(i))) << ","
            << fixed2(py(profile.mean_cf[i]));
    }
    svg << "\"/>\n";

    // axes with quarter ticks
    svg << "  <g stroke=\"#333\" stroke-width=\"1\" font-size=\"12\" "
           "font-family=\"sans-serif\">\n";
    svg << "    <line x1=\"" << fixed2(ml) << "\" y1=\"" << fixed2(py(0.0))
        << "\" x2=\"" << fixed2(px(1.0)) << "\" y2=\"" << fixed2(py(0.0))
        << "\"/>\n";
    svg << "    <line x1=\"" << fixed2(ml) << "\" y1=\"" << fixed2(py(0.0))
        << "\" x2=\"" << fixed2(ml) << "\" y2=\"" << fixed2(py(1.0))
        << "\"/>\n";
    for (int q = 0; q <= 4; ++q) {
        const double f = q / 4.0;
        svg << "    <line x1=\"" << fixed2(px(f)) << "\" y1=\""
            << fixed2(py(0.0)) << "\" x2=\"" << fixed2(px(f)) << "\" y2=\""
            << fixed2(py(0.0) + 5) << "\"/>\n";
        svg << "    <text x=\"" << fixed2(px(f)) << "\" y=\""
            << fixed2(py(0.0) + 20)
            << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\">"
            << fixed2(f) << "</text>\n";
        svg << "    <line x1=\"" << fixed2(ml - 5) << "\" y1=\""
            << fixed2(py(f)) << "\" x2=\"" << fixed2(ml) << "\" y2=\""
            << fixed2(py(f)) << "\"/>\n";
        svg << "    <text x=\"" << fixed2(ml - 8) << "\" y=\""
            << fixed2(py(f) + 4)
            << "\" text-anchor=\"end\" stroke=\"none\" fill=\"#333\">"
            << fixed2(f) << "</text>\n";
    }
    svg << "    <text x=\"" << fixed2(px(0.5)) << "\" y=\""
        << fixed2(height - 10)
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\">t / "
           "T_c</text>\n";
    svg << "    <text x=\"15\" y=\"" << fixed2(py(0.5))
        << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"#333\" "
           "transform=\"rotate(-90 15 "
        << fixed2(py(0.5)) << ")\">critical functionality</text>\n";
    svg << "  </g>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string emit_assets_csv(
    const std::vector<scorecard::RankedAsset>& ranked) {
    std::string out =
        "asset,confidentiality,integrity,availability,loss,threat,priority\n";
    for (const auto& r : ranked) {
        out += csv_field(r.asset.name);
        out += ',';
        out += scorecard::to_string(r.asset.loss.confidentiality);
        out += ',';
        out += scorecard::to_string(r.asset.loss.integrity);
        out += ',';
        out += scorecard::to_string(r.asset.loss.availability);
        out += ',';
        out += scorecard::to_string(r.streamlined_loss);
        out += ',';
        out += scorecard::to_string(r.asset.threat);
        out += ',';
        out += std::to_string(r.priority);
        out += '\n';
    }
    return out;
}

std::string emit_gap_csv(const scorecard::GapReport& report) {
    std::string out = "stage,domain,current,target,gap\n";
    for (const auto& g : report.gaps) {
        out += scorecard::to_string(g.stage);
        out += ',';
        out += scorecard::to_string(g.domain);
        out += ',';
        out += format_double(g.current);
        out += ',';
        out += format_double(g.target);
        out += ',';
        out += format_double(g.gap);
        out += '\n';
    }
    return out;
}

json to_json(const scorecard::MatrixScores& scores) {
    json j;
    j["overall"] = scores.overall;
    json stages = json::object();
    for (const auto s : scorecard::all_stages) {
        const auto& v = scores.stage_scores[static_cast<int>(s)];
        stages[scorecard::to_string(s)] = v ? json(*v) : json(nullptr);
    }
    j["stages"] = stages;
    json domains = json::object();
    for (const auto d : scorecard::all_domains) {
        const auto& v = scores.domain_scores[static_cast<int>(d)];
        domains[scorecard::to_string(d)] = v ? json(*v) : json(nullptr);
    }
    j["domains"] = domains;
    json cells = json::array();
    for (const auto& c : scores.cells)
        cells.push_back({{"stage", scorecard::to_string(c.stage)},
                         {"domain", scorecard::to_string(c.domain)},
                         {"score", c.score ? json(*c.score) : json(nullptr)},
                         {"scored_entries", c.scored_entries},
                         {"unscored_entries", c.unscored_entries}});
    j["cells"] = cells;
    j["coverage_gaps"] = scores.coverage_gaps;
    return j;
}

json to_json(const scorecard::GapReport& report) {
    json gaps = json::array();
    for (const auto& g : report.gaps)
        gaps.push_back({{"stage", scorecard::to_string(g.stage)},
                        {"domain", scorecard::to_string(g.domain)},
                        {"current", g.current},
                        {"target", g.target},
                        {"gap", g.gap}});
    json j;
    j["gaps"] = gaps;
    j["structural_gaps"] = report.structural_gaps;
    return j;
}

json to_json(const scorecard::RecordQuality& quality) {
    json checks = json::array();
    for (const auto& c : quality.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}});
    json j;
    j["checks"] = checks;
    j["overall"] = quality.overall;
    return j;
}

json to_json(const std::vector<Violation>& violations) {
    json list = json::array();
    for (const auto& v : violations)
        list.push_back({{"subject", v.subject},
                        {"rule", v.rule},
                        {"message", v.message}});
    json j;
    j["violations"] = list;
    return j;
}

// ---- round-trip parsers -------------------------------------------------

ResilienceReport report_from_json(const json& doc) {
    Ctx ctx;
    expect_keys(ctx, doc, "",
                {"resilience", "robustness", "risk", "runs", "seed",
                 "config_digest"});
    ResilienceReport report;
    const auto num = [&](const char* key, double& out) {
        if (const json* v = member(doc, key)) {
            if (const auto x = as_number(ctx, *v, key)) out = *x;
        } else {
            ctx.add(key, "missing required field");
        }
    };
    num("resilience", report.resilience);
    num("robustness", report.robustness);
    num("risk", report.risk);
    if (const json* v = member(doc, "runs")) {
        if (const auto x = as_uint(ctx, *v, "runs")) report.runs = *x;
    } else {
        ctx.add("runs", "missing required field");
    }
    if (const json* v = member(doc, "seed")) {
        if (const auto x = as_uint(ctx, *v, "seed")) report.seed = *x;
    } else {
        ctx.add("seed", "missing required field");
    }
    if (const json* v = member(doc, "config_digest")) {
        if (const auto x = as_string(ctx, *v, "config_digest"))
            report.config_digest = *x;
    } else {
        ctx.add("config_digest", "missing required field");
    }
    ctx.finish();
    return report;
}

ResilienceProfile profile_from_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "t_norm,cf_mean,cf_std,n_runs")
        throw InputError("profile csv: bad header");
    ResilienceProfile profile;
    const auto parse_field = [](const std::string& s, double& out) {
        const auto res =
            std::from_chars(s.data(), s.data() + s.size(), out);
        return res.ec == std::errc() && res.ptr == s.data() + s.size();
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<std::string, 4> fields;
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            const auto comma = line.find(',', start);
            if (f < 3 && comma == std::string::npos)
                throw InputError("profile csv: bad row '" + line + "'");
            fields[f] = line.substr(
                start, comma == std::string::npos ? line.size() - start
                                                  : comma - start);
            start = comma + 1;
        }
        double mean = 0.0, sd = 0.0, runs = 0.0, tn = 0.0;
        if (!parse_field(fields[0], tn) || !parse_field(fields[1], mean) ||
            !parse_field(fields[2], sd) || !parse_field(fields[3], runs))
            throw InputError("profile csv: bad row '" + line + "'");
        profile.mean_cf.push_back(mean);
        profile.std_cf.push_back(sd);
        profile.runs = static_cast<std::uint64_t>(runs);
    }
    if (profile.mean_cf.empty()) throw InputError("profile csv: no rows");
    profile.steps = static_cast<std::uint32_t>(profile.mean_cf.size() - 1);
    return profile;
}

} // namespace resilnet
