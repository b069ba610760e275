#pragma once

#include <fds/checks.hpp>
#include <fds/error.hpp>
#include <fds/metrics.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// Shape criteria
// ---------------------------------------------------------------------------

enum class Desideratum : std::uint8_t
{
    d1b,
    d2,
    d3,
    d4,
    d5,
};

inline constexpr std::array<Desideratum, 5> all_desiderata{Desideratum::d1b, Desideratum::d2, Desideratum::d3,
                                                           Desideratum::d4, Desideratum::d5};

constexpr std::string_view desideratum_id(Desideratum d) noexcept
{
    constexpr std::array<std::string_view, 5> ids{"D1b", "D2", "D3", "D4", "D5"};
    return ids[static_cast<std::size_t>(d)];
}

constexpr std::string_view desideratum_label(Desideratum d) noexcept
{
    constexpr std::array<std::string_view, 5> labels{"D1b (purpose)", "D2 (hyperparameters)", "D3 (data)",
                                                     "D4 (bounds)", "D5 (invariance)"};
    return labels[static_cast<std::size_t>(d)];
}

/// Peak at the grid position `quantile`.
struct Bell
{
    double quantile = 0.5;
    friend bool operator==(Bell const&, Bell const&) = default;
};

struct LowToHigh
{
    friend bool operator==(LowToHigh const&, LowToHigh const&) = default;
};

struct HighToLow
{
    friend bool operator==(HighToLow const&, HighToLow const&) = default;
};

struct HighToLowWithDrop
{
    double quantile = 0.5;
    double min_drop = 0.1;
    friend bool operator==(HighToLowWithDrop const&, HighToLowWithDrop const&) = default;
};

struct Horizontal
{
    friend bool operator==(Horizontal const&, Horizontal const&) = default;
};

/// Spread of the values from the grid position `quantile` onwards is small.
struct Converging
{
    double quantile = 0.5;
    friend bool operator==(Converging const&, Converging const&) = default;
};

/// Value at the grid position `quantile` is within `tol` of `target`.
struct PointClose
{
    double quantile = 0.0;
    double target = 0.0;
    double tol = 0.05;
    friend bool operator==(PointClose const&, PointClose const&) = default;
};

using ShapeCriterion = std::variant<Bell, LowToHigh, HighToLow, HighToLowWithDrop, Horizontal, Converging, PointClose>;

namespace shape {

inline constexpr double rise = 0.2;       // extreme-to-extreme or extreme-to-peak difference
inline constexpr double slack = 0.1;      // allowed distance of an extreme from the max/min
inline constexpr double flat = 0.05;      // horizontal and converging spread
inline constexpr double epsilon = 1e-12;  // rounding allowance on every threshold

} // namespace shape

/// Nearest grid index to a fractional position, halves rounded up.
inline std::size_t quantile_index(double q, std::size_t n)
{
    detail::require(n >= 1, "empty curve");
    detail::require(q >= 0.0 && q <= 1.0, "quantile must lie in [0, 1]");
    auto const i = static_cast<std::size_t>(std::floor(q * static_cast<double>(n - 1) + 0.5 + 1e-9));
    return std::min(i, n - 1);
}

struct ShapeResult
{
    bool pass = false;
    /// Smallest slack over all conditions; >= 0 (up to epsilon) on a pass.
    double margin = 0.0;
    /// A point the criterion reads is missing.
    bool error = false;
};

namespace detail {

/// Grid indices a criterion looks at.
inline std::vector<std::size_t> indices_read(ShapeCriterion const& c, std::size_t n)
{
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    if (auto const* p = std::get_if<PointClose>(&c)) return {quantile_index(p->quantile, n)};
    if (auto const* p = std::get_if<Converging>(&c))
        return std::vector<std::size_t>(all.begin() + static_cast<std::ptrdiff_t>(quantile_index(p->quantile, n)),
                                        all.end());
    return all;
}

} // namespace detail

/// Applies one shape criterion to a mean curve. NaN entries at indices the
/// criterion reads make the result an error.
inline ShapeResult eval_shape(std::span<double const> v, ShapeCriterion const& criterion)
{
    std::size_t const n = v.size();
    detail::require(n >= 3, "shape criteria need at least 3 grid points");
    for (std::size_t i : detail::indices_read(criterion, n))
        if (!std::isfinite(v[i])) return {false, std::numeric_limits<double>::quiet_NaN(), true};

    double const lo = *std::min_element(v.begin(), v.end());
    double const hi = *std::max_element(v.begin(), v.end());
    double const left = v.front();
    double const right = v.back();
    std::vector<double> slacks;

    auto high_to_low = [&] {
        slacks.push_back((left - right) - shape::rise);
        slacks.push_back(shape::slack - (right - lo));
        slacks.push_back(shape::slack - (hi - left));
    };

    std::visit(
        [&](auto const& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Bell>) {
                double const mid = v[quantile_index(c.quantile, n)];
                slacks.push_back((mid - left) - shape::rise);
                slacks.push_back((mid - right) - shape::rise);
                slacks.push_back(shape::slack - (hi - mid));
                slacks.push_back(shape::slack - (left - lo));
                slacks.push_back(shape::slack - (right - lo));
            } else if constexpr (std::is_same_v<T, LowToHigh>) {
                slacks.push_back((right - left) - shape::rise);
                slacks.push_back(shape::slack - (left - lo));
                slacks.push_back(shape::slack - (hi - right));
            } else if constexpr (std::is_same_v<T, HighToLow>) {
                high_to_low();
            } else if constexpr (std::is_same_v<T, HighToLowWithDrop>) {
                high_to_low();
                slacks.push_back((left - v[quantile_index(c.quantile, n)]) - c.min_drop);
            } else if constexpr (std::is_same_v<T, Horizontal>) {
                slacks.push_back(shape::flat - (hi - lo));
            } else if constexpr (std::is_same_v<T, Converging>) {
                auto const tail = v.subspan(quantile_index(c.quantile, n));
                slacks.push_back(shape::flat - (*std::max_element(tail.begin(), tail.end()) -
                                                *std::min_element(tail.begin(), tail.end())));
            } else if constexpr (std::is_same_v<T, PointClose>) {
                slacks.push_back(c.tol - std::abs(v[quantile_index(c.quantile, n)] - c.target));
            }
        },
        criterion);

    double const margin = *std::min_element(slacks.begin(), slacks.end());
    return {margin >= -shape::epsilon, margin, false};
}

// ---------------------------------------------------------------------------
// Per-check criteria
// ---------------------------------------------------------------------------

/// Criteria for one variant. `low` is set only for diversity entries where
/// high and low metrics are judged differently.
struct Rule
{
    std::vector<ShapeCriterion> high;
    std::optional<std::vector<ShapeCriterion>> low;

    friend bool operator==(Rule const&, Rule const&) = default;
};

struct CriteriaEntry
{
    std::string row;
    Desideratum desideratum = Desideratum::d1b;
    MetricKind kind = MetricKind::fidelity;
    Rule rule;
    /// Variant-specific replacements of `rule`.
    std::vector<std::pair<std::string, Rule>> variant_rules;
    /// Dual results are reported as H/L; otherwise a consistent pass is T.
    bool report_type = true;

    Rule const& rule_for(std::string_view variant) const
    {
        for (auto const& [id, r] : variant_rules)
            if (id == variant) return r;
        return rule;
    }

    bool dual() const
    {
        if (rule.low) return true;
        for (auto const& [id, r] : variant_rules)
            if (r.low) return true;
        return false;
    }

    friend bool operator==(CriteriaEntry const&, CriteriaEntry const&) = default;
};

/// Table rows: display label, check id, variant-id prefix selecting the
/// variants of that check which belong to the row.
struct TableRow
{
    std::string label;
    std::string check;
    std::string variant_prefix;
    bool tabular_only = false;
};

inline std::vector<TableRow> table_rows()
{
    std::vector<TableRow> rows{
        {"Discrete Num. vs. Continuous Num.", "discrete_continuous", "", true},
        {"Gaussian Mean Difference", "gaussian_mean_difference", "", false},
        {"Gaussian Mean Difference + Outlier", "gaussian_mean_difference_outlier", "", false},
        {"Gaussian Mean Difference + Pareto", "gaussian_mean_difference_pareto", "", true},
        {"Gaussian Std. Deviation Difference", "gaussian_std_difference", "", false},
        {"Hypercube, Varying Sample Size", "hypercube_sample_size", "", false},
        {"Hypercube, Varying Syn. Size", "hypercube_synthetic_size", "", false},
        {"Hypersphere Surface", "hypersphere_surface", "", false},
        {"Mode Collapse", "mode_collapse", "", false},
        {"Mode Dropping + Invention", "mode_dropping_invention", "", false},
        {"One Disjoint Dim. + Many Identical Dim.", "one_disjoint_dimension", "", false},
        {"Scaling One Dimension", "scaling_one_dimension", "", false},
        {"Sequential Mode Dropping", "mode_dropping", "sequential_", false},
        {"Simultaneous Mode Dropping", "mode_dropping", "simultaneous_", false},
        {"Sphere vs. Torus", "sphere_torus", "", false},
    };
    std::sort(rows.begin(), rows.end(), [](auto const& a, auto const& b) { return a.label < b.label; });
    return rows;
}

inline std::optional<TableRow> find_row(std::string_view label)
{
    for (auto const& r : table_rows())
        if (r.label == label) return r;
    return std::nullopt;
}

/// Success criteria of every table row, per desideratum and metric kind.
inline std::vector<CriteriaEntry> build_criteria()
{
    std::vector<CriteriaEntry> out;
    auto add = [&](std::string row, Desideratum d, MetricKind k, Rule rule,
                   std::vector<std::pair<std::string, Rule>> per_variant = {}, bool report_type = true) {
        out.push_back({std::move(row), d, k, std::move(rule), std::move(per_variant), report_type});
    };
    auto both = [&](std::string const& row, Desideratum d, Rule rule) {
        add(row, d, MetricKind::fidelity, rule);
        add(row, d, MetricKind::diversity, rule);
    };
    auto close = [](double q, double target) -> ShapeCriterion { return PointClose{q, target, 0.05}; };
    using enum Desideratum;
    using enum MetricKind;

    Rule const bell_mid{{Bell{0.5}}, std::nullopt};
    Rule const bounds_zero_one_zero{{close(0.0, 0.0), close(1.0, 0.0), close(0.5, 1.0)}, std::nullopt};
    for (char const* row : {"Gaussian Mean Difference", "Gaussian Mean Difference + Outlier",
                            "Gaussian Mean Difference + Pareto", "Hypersphere Surface"}) {
        both(row, d1b, bell_mid);
        both(row, d4, bounds_zero_one_zero);
    }

    {
        std::string const row = "Gaussian Std. Deviation Difference";
        add(row, d1b, fidelity, {{HighToLow{}}, std::nullopt});
        add(row, d1b, diversity, {{LowToHigh{}}, std::vector<ShapeCriterion>{Bell{0.5}}});
        add(row, d4, fidelity, {{close(0.0, 1.0), close(0.5, 1.0), close(1.0, 0.0)}, std::nullopt});
        add(row, d4, diversity,
            {{close(0.0, 0.0), close(0.5, 1.0), close(1.0, 1.0)},
             std::vector<ShapeCriterion>{close(0.0, 0.0), close(0.5, 1.0), close(1.0, 0.0)}},
            {}, false);
    }
    for (auto [row, q] : {std::pair{"Sequential Mode Dropping", 0.5}, std::pair{"Simultaneous Mode Dropping", 0.95}}) {
        add(row, d1b, fidelity, {{Horizontal{}}, std::nullopt});
        add(row, d1b, diversity, {{HighToLowWithDrop{q, 0.1}}, std::nullopt});
        add(row, d4, fidelity, {{close(0.0, 1.0), close(1.0, 1.0)}, std::nullopt});
        add(row, d4, diversity, {{close(0.0, 1.0)}, std::nullopt});
    }
    {
        std::string const row = "Mode Dropping + Invention";
        double const five = 4.0 / 9.0; // 5 components on the 1..10 grid
        add(row, d1b, fidelity, {{HighToLow{}}, std::nullopt});
        add(row, d1b, diversity, {{LowToHigh{}}, std::nullopt});
        add(row, d4, fidelity, {{close(five, 1.0), close(0.0, 1.0)}, std::nullopt});
        add(row, d4, diversity, {{close(five, 1.0), close(1.0, 1.0)}, std::nullopt});
    }
    {
        std::string const row = "Hypercube, Varying Sample Size";
        both(row, d1b, {{close(1.0, 0.2)}, std::nullopt});
        both(row, d3, {{Converging{0.5}}, std::nullopt});
    }
    {
        std::string const row = "Hypercube, Varying Syn. Size";
        both(row, d1b, {{close(1.0, 0.2)}, std::nullopt});
        both(row, d2, {{Converging{0.5}}, std::nullopt});
    }
    {
        std::string const row = "Sphere vs. Torus";
        both(row, d1b, {{Converging{0.5}}, std::nullopt});
        both(row, d4, {{close(1.0, 0.0)}, std::nullopt});
    }
    {
        std::string const row = "Mode Collapse";
        add(row, d1b, fidelity, {{HighToLow{}}, std::nullopt});
        add(row, d1b, diversity, {{Horizontal{}}, std::vector<ShapeCriterion>{HighToLow{}}});
        both(row, d4, {{close(0.0, 1.0)}, std::nullopt});
    }
    {
        std::string const row = "Scaling One Dimension";
        both(row, d5, {{Horizontal{}}, std::nullopt});
        both(row, d4, {{close(0.0, 0.0), close(1.0, 0.0)}, std::nullopt});
    }
    {
        std::string const row = "One Disjoint Dim. + Many Identical Dim.";
        both(row, d1b, {{Horizontal{}}, std::nullopt});
        both(row, d4, {{close(0.0, 0.0), close(1.0, 0.0)}, std::nullopt});
    }
    {
        std::string const row = "Discrete Num. vs. Continuous Num.";
        both(row, d1b, {{Horizontal{}}, std::nullopt});
        add(row, d4, fidelity, {{close(0.0, 0.0), close(1.0, 0.0)}, std::nullopt},
            {{"continuous_real", Rule{{close(0.0, 1.0), close(1.0, 1.0)}, std::nullopt}}});
        add(row, d4, diversity,
            {{close(0.0, 1.0), close(1.0, 1.0)}, std::vector<ShapeCriterion>{close(0.0, 0.0), close(1.0, 0.0)}},
            {{"continuous_real", Rule{{close(0.0, 0.0), close(1.0, 0.0)}, std::nullopt}}}, false);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Outcome : std::uint8_t
{
    pass,
    fail,
    high,
    low,
    error,
};

constexpr char outcome_symbol(Outcome o) noexcept
{
    switch (o) {
    case Outcome::pass: return 'T';
    case Outcome::fail: return 'F';
    case Outcome::high: return 'H';
    case Outcome::low: return 'L';
    case Outcome::error: return 'E';
    }
    return '?';
}

inline Outcome outcome_from_symbol(char c)
{
    switch (c) {
    case 'T': return Outcome::pass;
    case 'F': return Outcome::fail;
    case 'H': return Outcome::high;
    case 'L': return Outcome::low;
    case 'E': return Outcome::error;
    default: throw PreconditionError(std::string("unknown verdict symbol '") + c + "'");
    }
}

struct VariantResult
{
    std::string variant;
    bool high_pass = false;
    /// Same as high_pass for single-criterion entries.
    bool low_pass = false;
    double high_margin = 0.0;
    double low_margin = 0.0;
    bool error = false;
};

struct Verdict
{
    std::string row;
    Desideratum desideratum = Desideratum::d1b;
    MetricId metric = MetricId::iprec;
    Outcome outcome = Outcome::fail;
    std::vector<VariantResult> variants;
    std::string diagnostic;
};

/// High iff every variant passes its high criteria, Low iff every variant
/// passes its low criteria, Fail otherwise; High wins when both hold.
inline Outcome classify_diversity_variant(std::span<VariantResult const> results)
{
    detail::require(!results.empty(), "classification needs at least one variant");
    bool high = true, low = true;
    for (auto const& r : results) {
        high = high && r.high_pass;
        low = low && r.low_pass;
    }
    return high ? Outcome::high : low ? Outcome::low : Outcome::fail;
}

namespace detail {

inline std::pair<bool, double> eval_all(std::span<double const> mean, std::vector<ShapeCriterion> const& cs, bool& error)
{
    bool pass = true;
    double margin = std::numeric_limits<double>::infinity();
    for (auto const& c : cs) {
        auto const r = eval_shape(mean, c);
        if (r.error) {
            error = true;
            continue;
        }
        pass = pass && r.pass;
        margin = std::min(margin, r.margin);
    }
    return {pass, margin};
}

} // namespace detail

/// Verdict of one metric on one criteria entry. `curves` must hold the
/// metric's curve for every variant of the row; a missing one fails with a
/// diagnostic.
inline Verdict eval_entry(CriteriaEntry const& entry, MetricId metric, std::vector<Curve const*> const& curves,
                          std::vector<std::string> const& expected_variants)
{
    Verdict v{entry.row, entry.desideratum, metric, Outcome::fail, {}, {}};
    if (expected_variants.empty()) {
        v.diagnostic = "row has no variants";
        return v;
    }
    bool any_error = false;
    for (auto const& variant : expected_variants) {
        Curve const* curve = nullptr;
        for (auto const* c : curves)
            if (c && c->variant == variant && c->metric == metric) curve = c;
        if (!curve) {
            v.diagnostic = "missing curve for variant '" + variant + "'";
            v.outcome = Outcome::fail;
            return v;
        }
        Rule const& rule = entry.rule_for(variant);
        VariantResult r;
        r.variant = variant;
        bool err = false;
        std::tie(r.high_pass, r.high_margin) = detail::eval_all(curve->mean, rule.high, err);
        if (rule.low)
            std::tie(r.low_pass, r.low_margin) = detail::eval_all(curve->mean, *rule.low, err);
        else
            std::tie(r.low_pass, r.low_margin) = std::pair{r.high_pass, r.high_margin};
        r.error = err;
        if (err) {
            any_error = true;
            for (std::size_t i = 0; i < curve->errors.size(); ++i) {
                if (!curve->point_ok(i)) {
                    v.diagnostic = "variant '" + variant + "' grid index " + std::to_string(i) + ": " +
                                   (curve->errors[i].empty() ? "missing value" : curve->errors[i]);
                    break;
                }
            }
        }
        v.variants.push_back(std::move(r));
    }
    if (any_error) {
        v.outcome = Outcome::error;
        return v;
    }
    if (metric_kind(metric) == MetricKind::diversity && entry.dual()) {
        Outcome const o = classify_diversity_variant(v.variants);
        v.outcome = entry.report_type || o == Outcome::fail ? o : Outcome::pass;
    } else {
        bool pass = true;
        for (auto const& r : v.variants) pass = pass && r.high_pass;
        v.outcome = pass ? Outcome::pass : Outcome::fail;
    }
    return v;
}

/// Variant ids of `check` that belong to `row`.
inline std::vector<std::string> row_variants(CheckSpec const& check, TableRow const& row)
{
    std::vector<std::string> ids;
    for (auto const& v : check.variants)
        if (v.id.starts_with(row.variant_prefix)) ids.push_back(v.id);
    return ids;
}

/// Verdicts for every criteria entry that applies to a row of `check`, for
/// each metric with curves present.
inline std::vector<Verdict> eval_check(CheckSpec const& check, std::vector<Curve> const& curves,
                                       std::vector<CriteriaEntry> const& criteria)
{
    std::vector<Verdict> out;
    std::vector<Curve const*> ptrs;
    for (auto const& c : curves) ptrs.push_back(&c);
    for (auto const& row : table_rows()) {
        if (row.check != check.id) continue;
        auto const variants = row_variants(check, row);
        for (auto const& entry : criteria) {
            if (entry.row != row.label) continue;
            for (MetricId m : all_metrics) {
                if (metric_kind(m) != entry.kind) continue;
                bool present = std::any_of(curves.begin(), curves.end(), [&](Curve const& c) { return c.metric == m; });
                if (!present) continue;
                out.push_back(eval_entry(entry, m, ptrs, variants));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, Desideratum d) { j = std::string(desideratum_id(d)); }

inline void from_json(nlohmann::json const& j, Desideratum& d)
{
    auto const s = j.get<std::string>();
    for (Desideratum x : all_desiderata)
        if (desideratum_id(x) == s) {
            d = x;
            return;
        }
    throw PreconditionError("unknown desideratum '" + s + "'");
}

inline void to_json(nlohmann::json& j, ShapeCriterion const& c)
{
    std::visit(
        [&](auto const& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Bell>)
                j = {{"shape", "bell"}, {"quantile", s.quantile}};
            else if constexpr (std::is_same_v<T, LowToHigh>)
                j = {{"shape", "low_to_high"}};
            else if constexpr (std::is_same_v<T, HighToLow>)
                j = {{"shape", "high_to_low"}};
            else if constexpr (std::is_same_v<T, HighToLowWithDrop>)
                j = {{"shape", "high_to_low_with_drop"}, {"quantile", s.quantile}, {"min_drop", s.min_drop}};
            else if constexpr (std::is_same_v<T, Horizontal>)
                j = {{"shape", "horizontal"}};
            else if constexpr (std::is_same_v<T, Converging>)
                j = {{"shape", "converging"}, {"quantile", s.quantile}};
            else
                j = {{"shape", "point_close"}, {"quantile", s.quantile}, {"target", s.target}, {"tol", s.tol}};
        },
        c);
}

inline void to_json(nlohmann::json& j, Rule const& r)
{
    j = nlohmann::json{{"high", r.high}};
    if (r.low) j["low"] = *r.low;
}

inline void to_json(nlohmann::json& j, CriteriaEntry const& e)
{
    j = nlohmann::json{{"row", e.row},   {"desideratum", e.desideratum}, {"kind", std::string(to_string(e.kind))},
                       {"rule", e.rule}, {"report_type", e.report_type}};
    if (!e.variant_rules.empty()) {
        nlohmann::json vr = nlohmann::json::object();
        for (auto const& [id, r] : e.variant_rules) vr[id] = r;
        j["variant_rules"] = vr;
    }
}

inline void to_json(nlohmann::json& j, VariantResult const& r)
{
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j = nlohmann::json{{"variant", r.variant},           {"high_pass", r.high_pass}, {"low_pass", r.low_pass},
                       {"high_margin", num(r.high_margin)}, {"low_margin", num(r.low_margin)}, {"error", r.error}};
}

inline void to_json(nlohmann::json& j, Verdict const& v)
{
    j = nlohmann::json{{"row", v.row},
                       {"desideratum", v.desideratum},
                       {"metric", v.metric},
                       {"outcome", std::string(1, outcome_symbol(v.outcome))},
                       {"variants", v.variants}};
    if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
}

} // namespace fds
