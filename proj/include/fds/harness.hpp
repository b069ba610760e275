#pragma once

#include <fds/checks.hpp>
#include <fds/criteria.hpp>
#include <fds/error.hpp>
#include <fds/metrics.hpp>
#include <fds/parallel.hpp>
#include <fds/random.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fds {

/// Replaces one metric's value in every repeat of one grid cell with NaN.
struct FaultInjection
{
    std::string check;
    std::string variant;
    std::size_t grid = 0;
    MetricId metric = MetricId::iprec;

    friend bool operator==(FaultInjection const&, FaultInjection const&) = default;
};

struct SuiteConfig
{
    std::uint64_t seed = 1;
    /// Unset: catalog default (10, or 5 with `fast`).
    std::optional<std::size_t> repeats;
    MetricConfig metrics;
    /// Check ids to run; empty runs all of them.
    std::vector<std::string> checks;
    /// Dataset size where size is not the swept variable.
    std::optional<std::size_t> size;
    /// Points of continuous sweeps.
    std::optional<std::size_t> grid_points;
    bool fast = false;
    std::size_t workers = 1;
    std::vector<FaultInjection> faults;

    CatalogOptions catalog_options() const
    {
        CatalogOptions opt = fast ? CatalogOptions::fast() : CatalogOptions{};
        if (repeats) opt.repeats = *repeats;
        if (size) opt.size = *size;
        if (grid_points) opt.grid_points = *grid_points;
        return opt;
    }

    void validate() const
    {
        detail::require(!repeats || *repeats >= 1, "repeats must be at least 1");
        detail::require(!size || *size >= 50, "dataset size must be at least 50");
        detail::require(!grid_points || *grid_points >= 3, "sweeps need at least 3 grid points");
        detail::require(workers >= 1, "worker count must be at least 1");
        metrics.validate();
    }
};

struct CheckTiming
{
    std::string check;
    /// Sum of the check's cell evaluation times.
    double seconds = 0.0;
};

struct Provenance
{
    std::uint64_t seed = 0;
    std::string config_hash;
    /// Hash of the catalog and criteria definitions.
    std::string catalog_hash;
    std::size_t workers = 1;
    double wall_seconds = 0.0;
    std::vector<CheckTiming> timings;
};

struct SuiteResults
{
    SuiteConfig config;
    std::vector<CheckSpec> checks;
    std::vector<Curve> curves;
    std::vector<Verdict> verdicts;
    Provenance provenance;

    std::vector<Curve> curves_of(std::string_view check) const
    {
        std::vector<Curve> out;
        for (auto const& c : curves)
            if (c.check == check) out.push_back(c);
        return out;
    }

    Verdict const* find(std::string_view row, Desideratum d, MetricId m) const
    {
        for (auto const& v : verdicts)
            if (v.row == row && v.desideratum == d && v.metric == m) return &v;
        return nullptr;
    }
};

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void to_json(nlohmann::json& j, SuiteConfig const& c);

/// Hash of the settings that determine results; worker count is excluded.
inline std::string config_hash(SuiteConfig const& cfg)
{
    nlohmann::json j = cfg;
    j.erase("workers");
    return hex64(detail::fnv1a(j.dump()));
}

inline std::string definition_hash(std::vector<CheckSpec> const& checks)
{
    nlohmann::json j{{"checks", checks}, {"criteria", build_criteria()}};
    return hex64(detail::fnv1a(j.dump()));
}

/// The catalog for `cfg`, restricted to the selected checks in catalog order.
inline std::vector<CheckSpec> select_checks(SuiteConfig const& cfg)
{
    auto all = build_check_catalog(cfg.catalog_options());
    for (auto const& id : cfg.checks) {
        bool const known = std::any_of(all.begin(), all.end(), [&](CheckSpec const& c) { return c.id == id; });
        if (!known) throw PreconditionError("unknown check id '" + id + "'");
    }
    if (cfg.checks.empty()) return all;
    std::vector<CheckSpec> out;
    for (auto& c : all)
        if (std::find(cfg.checks.begin(), cfg.checks.end(), c.id) != cfg.checks.end()) out.push_back(std::move(c));
    return out;
}

namespace detail {

struct SuiteTask
{
    std::size_t check = 0;
    CellKey key;
    double cost = 0.0;
};

inline void inject_faults(std::vector<FaultInjection> const& faults, CheckSpec const& spec, CellKey const& key,
                          std::vector<MetricScore>& scores)
{
    for (auto const& f : faults) {
        if (f.check != spec.id || f.variant != spec.variants[key.variant].id || f.grid != key.grid) continue;
        for (auto& s : scores)
            if (s.id == f.metric) {
                s.value = std::numeric_limits<double>::quiet_NaN();
                s.error = "injected fault";
            }
    }
}

} // namespace detail

/// Runs every selected check and evaluates its criteria. Cells run on
/// `cfg.workers` threads; results are merged by cell key, so they do not
/// depend on the worker count. Failing cells become error records.
inline SuiteResults run_suite(SuiteConfig const& cfg, std::vector<CheckSpec> checks)
{
    cfg.validate();
    for (auto const& c : checks) validate(c);
    auto const wall0 = std::chrono::steady_clock::now();

    std::vector<detail::SuiteTask> tasks;
    for (std::size_t c = 0; c < checks.size(); ++c) {
        auto const& spec = checks[c];
        for (std::size_t v = 0; v < spec.variants.size(); ++v)
            for (std::size_t g = 0; g < spec.variants[v].points.size(); ++g) {
                auto const& p = spec.variants[v].points[g];
                double const n = static_cast<double>(p.real_size + p.synthetic_size);
                double const cost = n * n * static_cast<double>(dimension(p.real) + 8);
                for (std::size_t r = 0; r < spec.repeats; ++r) tasks.push_back({c, {v, g, r}, cost});
            }
    }
    // expensive cells first so the tail of the schedule is short
    std::stable_sort(tasks.begin(), tasks.end(),
                     [](detail::SuiteTask const& a, detail::SuiteTask const& b) { return a.cost > b.cost; });

    std::vector<std::vector<MetricScore>> scores(tasks.size());
    std::vector<double> seconds(tasks.size(), 0.0);
    parallel_for(tasks.size(), cfg.workers, [&](std::size_t t) {
        auto const t0 = std::chrono::steady_clock::now();
        auto const& task = tasks[t];
        auto const& spec = checks[task.check];
        scores[t] = evaluate_cell(spec, task.key, cfg.metrics, cfg.seed);
        detail::inject_faults(cfg.faults, spec, task.key, scores[t]);
        seconds[t] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    SuiteResults res;
    res.config = cfg;
    std::vector<std::vector<Curve>> per_check(checks.size());
    for (std::size_t c = 0; c < checks.size(); ++c)
        per_check[c] = empty_curves(checks[c], cfg.metrics, checks[c].repeats);
    std::vector<double> check_seconds(checks.size(), 0.0);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        store_cell(per_check[tasks[t].check], checks[tasks[t].check], cfg.metrics, tasks[t].key, scores[t]);
        check_seconds[tasks[t].check] += seconds[t];
    }

    auto const criteria = build_criteria();
    for (std::size_t c = 0; c < checks.size(); ++c) {
        for (auto& curve : per_check[c]) finalize_curve(curve);
        for (auto& v : eval_check(checks[c], per_check[c], criteria)) res.verdicts.push_back(std::move(v));
        for (auto& curve : per_check[c]) res.curves.push_back(std::move(curve));
        res.provenance.timings.push_back({checks[c].id, check_seconds[c]});
    }

    res.provenance.seed = cfg.seed;
    res.provenance.config_hash = config_hash(cfg);
    res.provenance.catalog_hash = definition_hash(checks);
    res.provenance.workers = cfg.workers;
    res.checks = std::move(checks);
    res.provenance.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return res;
}

inline SuiteResults run_suite(SuiteConfig const& cfg) { return run_suite(cfg, select_checks(cfg)); }

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, FaultInjection const& f)
{
    j = nlohmann::json{{"check", f.check}, {"variant", f.variant}, {"grid", f.grid}, {"metric", f.metric}};
}

inline void from_json(nlohmann::json const& j, FaultInjection& f)
{
    f.check = j.at("check").get<std::string>();
    f.variant = j.at("variant").get<std::string>();
    f.grid = j.at("grid").get<std::size_t>();
    f.metric = j.at("metric").get<MetricId>();
}

inline void to_json(nlohmann::json& j, SuiteConfig const& c)
{
    auto opt = [](std::optional<std::size_t> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    j = nlohmann::json{{"seed", c.seed},       {"repeats", opt(c.repeats)},
                       {"metrics", c.metrics}, {"checks", c.checks},
                       {"size", opt(c.size)},  {"grid_points", opt(c.grid_points)},
                       {"fast", c.fast},       {"workers", c.workers},
                       {"faults", c.faults}};
}

inline void from_json(nlohmann::json const& j, SuiteConfig& c)
{
    SuiteConfig const d;
    auto opt = [&](char const* key) -> std::optional<std::size_t> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<std::size_t>();
    };
    c.seed = j.value("seed", d.seed);
    c.repeats = opt("repeats");
    c.metrics = j.value("metrics", d.metrics);
    c.checks = j.value("checks", d.checks);
    c.size = opt("size");
    c.grid_points = opt("grid_points");
    c.fast = j.value("fast", d.fast);
    c.workers = j.value("workers", d.workers);
    c.faults = j.value("faults", d.faults);
}

inline void to_json(nlohmann::json& j, Provenance const& p)
{
    nlohmann::json timings = nlohmann::json::object();
    for (auto const& t : p.timings) timings[t.check] = t.seconds;
    j = nlohmann::json{{"seed", p.seed},
                       {"config_hash", p.config_hash},
                       {"catalog_hash", p.catalog_hash},
                       {"workers", p.workers},
                       {"wall_seconds", p.wall_seconds},
                       {"check_seconds", timings}};
}

} // namespace fds
