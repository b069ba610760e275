#pragma once

#include <fds/checks.hpp>
#include <fds/criteria.hpp>
#include <fds/dataset.hpp>
#include <fds/error.hpp>
#include <fds/harness.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// Verdict tables
// ---------------------------------------------------------------------------

struct VerdictTable
{
    struct Row
    {
        Desideratum desideratum = Desideratum::d1b;
        std::string check;
        bool tabular = false;
        /// One symbol per entry of `metrics`.
        std::string cells;

        friend bool operator==(Row const&, Row const&) = default;
    };

    MetricKind kind = MetricKind::fidelity;
    std::vector<MetricId> metrics;
    std::vector<Row> rows;

    char cell(std::string_view check, Desideratum d, MetricId m) const
    {
        auto const col = std::find(metrics.begin(), metrics.end(), m);
        if (col == metrics.end()) throw PreconditionError("table has no column " + std::string(metric_id(m)));
        for (auto const& r : rows)
            if (r.check == check && r.desideratum == d) return r.cells[static_cast<std::size_t>(col - metrics.begin())];
        throw PreconditionError("table has no row " + std::string(check) + " / " + std::string(desideratum_id(d)));
    }

    bool has_errors() const
    {
        return std::any_of(rows.begin(), rows.end(), [](Row const& r) { return r.cells.find('E') != std::string::npos; });
    }

    friend bool operator==(VerdictTable const&, VerdictTable const&) = default;
};

/// Rows grouped by desideratum, then by check label; only rows whose check
/// was run. A verdict that is absent renders as E.
inline VerdictTable render_table(SuiteResults const& results, MetricKind kind)
{
    VerdictTable t;
    t.kind = kind;
    for (MetricId m : all_metrics)
        if (metric_kind(m) == kind && results.config.metrics.enabled(m)) t.metrics.push_back(m);
    auto const criteria = build_criteria();
    auto const rows = table_rows();
    for (Desideratum d : all_desiderata) {
        for (auto const& row : rows) {
            bool const run = std::any_of(results.checks.begin(), results.checks.end(),
                                         [&](CheckSpec const& c) { return c.id == row.check; });
            bool const listed = std::any_of(criteria.begin(), criteria.end(), [&](CriteriaEntry const& e) {
                return e.row == row.label && e.desideratum == d && e.kind == kind;
            });
            if (!run || !listed) continue;
            VerdictTable::Row r{d, row.label, row.tabular_only, {}};
            for (MetricId m : t.metrics) {
                auto const* v = results.find(row.label, d, m);
                r.cells.push_back(v ? outcome_symbol(v->outcome) : 'E');
            }
            t.rows.push_back(std::move(r));
        }
    }
    return t;
}

inline constexpr std::string_view diagnostics_file = "diagnostics.json";

inline std::string table_markdown(VerdictTable const& t)
{
    std::ostringstream out;
    out << "| Desideratum | Sanity check | Tab. |";
    for (MetricId m : t.metrics) out << ' ' << metric_label(m) << " |";
    out << "\n| --- | --- | --- |";
    for (std::size_t i = 0; i < t.metrics.size(); ++i) out << " --- |";
    out << '\n';
    for (auto const& r : t.rows) {
        out << "| " << desideratum_label(r.desideratum) << " | " << r.check << " | " << (r.tabular ? "yes" : "")
            << " |";
        for (char c : r.cells) out << ' ' << c << " |";
        out << '\n';
    }
    if (t.has_errors())
        out << "\nE: the metric failed on at least one point the criterion reads; see " << diagnostics_file << ".\n";
    return out.str();
}

namespace detail {

inline std::string csv_quote(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

/// Splits one CSV line with RFC 4180 quoting.
inline std::vector<std::string> split_quoted(std::string_view line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char const c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw SchemaError("", "unterminated quote in CSV line");
    return fields;
}

} // namespace detail

inline std::string table_csv(VerdictTable const& t)
{
    std::ostringstream out;
    out << "desideratum,check,tab";
    for (MetricId m : t.metrics) out << ',' << metric_id(m);
    out << '\n';
    for (auto const& r : t.rows) {
        out << desideratum_id(r.desideratum) << ',' << detail::csv_quote(r.check) << ',' << (r.tabular ? 1 : 0);
        for (char c : r.cells) out << ',' << c;
        out << '\n';
    }
    return out.str();
}

inline VerdictTable parse_table_csv(std::string const& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("", "empty table CSV");
    auto header = detail::split_quoted(line);
    if (header.size() < 3 || header[0] != "desideratum" || header[1] != "check" || header[2] != "tab")
        throw SchemaError("", "table CSV header must start with desideratum,check,tab");
    VerdictTable t;
    for (std::size_t i = 3; i < header.size(); ++i) {
        auto m = parse_metric_id(header[i]);
        if (!m) throw SchemaError(header[i], "unknown metric column");
        t.metrics.push_back(*m);
    }
    if (!t.metrics.empty()) t.kind = metric_kind(t.metrics.front());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = detail::split_quoted(line);
        if (f.size() != header.size()) throw SchemaError("", "table CSV row has the wrong number of fields");
        VerdictTable::Row r;
        r.desideratum = nlohmann::json(f[0]).get<Desideratum>();
        r.check = f[1];
        r.tabular = f[2] == "1";
        for (std::size_t i = 3; i < f.size(); ++i) {
            if (f[i].size() != 1) throw SchemaError(header[i], "verdict cell must be one symbol");
            outcome_from_symbol(f[i][0]);
            r.cells.push_back(f[i][0]);
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

/// check,variant,metric,x,mean,repeat_0..repeat_{R-1}; one line per grid
/// point, shortest round-trip decimals, NaN written as "nan".
inline std::string curves_csv(std::vector<Curve> const& curves)
{
    std::size_t repeats = 0;
    for (auto const& c : curves) repeats = std::max(repeats, c.values.size());
    std::ostringstream out;
    out << "check,variant,metric,x,mean";
    for (std::size_t r = 0; r < repeats; ++r) out << ",repeat_" << r;
    out << '\n';
    for (auto const& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            out << c.check << ',' << c.variant << ',' << metric_id(c.metric) << ',' << format_double(c.x[i]) << ','
                << format_double(c.mean[i]);
            for (std::size_t r = 0; r < repeats; ++r)
                out << ',' << (r < c.values.size() ? format_double(c.values[r][i]) : std::string("nan"));
            out << '\n';
        }
    }
    return out.str();
}

namespace detail {

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline double null_to_nan(nlohmann::json const& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline nlohmann::json numbers(std::vector<double> const& v)
{
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(number_or_null(x));
    return a;
}

inline std::vector<double> numbers_from(nlohmann::json const& a)
{
    std::vector<double> v;
    for (auto const& x : a) v.push_back(null_to_nan(x));
    return v;
}

} // namespace detail

inline nlohmann::json curve_to_json(Curve const& c)
{
    nlohmann::json values = nlohmann::json::array();
    for (auto const& row : c.values) values.push_back(detail::numbers(row));
    return {{"check", c.check},   {"variant", c.variant},       {"metric", c.metric},
            {"parameter", c.parameter}, {"x", detail::numbers(c.x)}, {"mean", detail::numbers(c.mean)},
            {"values", values},   {"errors", c.errors}};
}

inline Curve curve_from_json(nlohmann::json const& j)
{
    Curve c;
    c.check = j.at("check").get<std::string>();
    c.variant = j.at("variant").get<std::string>();
    c.metric = j.at("metric").get<MetricId>();
    c.parameter = j.at("parameter").get<std::string>();
    c.x = detail::numbers_from(j.at("x"));
    c.mean = detail::numbers_from(j.at("mean"));
    for (auto const& row : j.at("values")) c.values.push_back(detail::numbers_from(row));
    c.errors = j.at("errors").get<std::vector<std::string>>();
    if (c.mean.size() != c.x.size() || c.errors.size() != c.x.size())
        throw SchemaError("curves", "curve '" + c.check + "/" + c.variant + "' has mismatched lengths");
    for (auto const& row : c.values)
        if (row.size() != c.x.size())
            throw SchemaError("curves", "curve '" + c.check + "/" + c.variant + "' has a short repeat");
    return c;
}

inline constexpr int curves_bundle_version = 1;

/// All curves plus the configuration that produced them (minus the worker
/// count); NaN is stored as null.
inline nlohmann::json curves_bundle(SuiteResults const& results)
{
    nlohmann::json curves = nlohmann::json::array();
    for (auto const& c : results.curves) curves.push_back(curve_to_json(c));
    nlohmann::json config = results.config;
    config.erase("workers");
    return {{"version", curves_bundle_version},
            {"seed", results.config.seed},
            {"config", config},
            {"curves", curves}};
}

struct CurveBundle
{
    SuiteConfig config;
    std::vector<Curve> curves;
};

inline CurveBundle load_curves_bundle(nlohmann::json const& j)
{
    if (j.value("version", 0) != curves_bundle_version)
        throw SchemaError("version", "unsupported curve bundle version");
    CurveBundle b;
    b.config = j.at("config").get<SuiteConfig>();
    for (auto const& c : j.at("curves")) b.curves.push_back(curve_from_json(c));
    return b;
}

/// Curves grouped per check id, in first-seen order.
inline std::vector<std::pair<std::string, std::vector<Curve>>> group_by_check(std::vector<Curve> const& curves)
{
    std::vector<std::pair<std::string, std::vector<Curve>>> out;
    for (auto const& c : curves) {
        auto it = std::find_if(out.begin(), out.end(), [&](auto const& p) { return p.first == c.check; });
        if (it == out.end()) it = out.insert(out.end(), {c.check, {}});
        it->second.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Diagnostics and output directory
// ---------------------------------------------------------------------------

/// Every failed curve point and every verdict with a diagnostic.
inline nlohmann::json diagnostics(SuiteResults const& results)
{
    nlohmann::json points = nlohmann::json::array();
    for (auto const& c : results.curves)
        for (std::size_t i = 0; i < c.x.size(); ++i)
            if (!c.point_ok(i))
                points.push_back({{"check", c.check},
                                  {"variant", c.variant},
                                  {"metric", c.metric},
                                  {"grid", i},
                                  {"x", detail::number_or_null(c.x[i])},
                                  {"error", c.errors[i]}});
    nlohmann::json verdicts = nlohmann::json::array();
    for (auto const& v : results.verdicts)
        if (!v.diagnostic.empty() || v.outcome == Outcome::error)
            verdicts.push_back({{"row", v.row},
                                {"desideratum", v.desideratum},
                                {"metric", v.metric},
                                {"outcome", std::string(1, outcome_symbol(v.outcome))},
                                {"diagnostic", v.diagnostic}});
    return {{"curve_points", points}, {"verdicts", verdicts}};
}

namespace detail {

inline void write_text(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

inline std::string read_text(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace detail

/// Writes per-check curve CSVs into `dir/curves`.
inline void export_curves(std::vector<Curve> const& curves, std::filesystem::path const& dir)
{
    std::filesystem::create_directories(dir / "curves");
    for (auto const& [check, cs] : group_by_check(curves))
        detail::write_text(dir / "curves" / (check + ".csv"), curves_csv(cs));
}

/// Writes tables, curves, verdicts, diagnostics and provenance into `dir`.
/// Everything except provenance.json is a deterministic function of the
/// seed and configuration.
inline void write_results(SuiteResults const& results, std::filesystem::path const& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    auto const fid = render_table(results, MetricKind::fidelity);
    auto const div = render_table(results, MetricKind::diversity);
    detail::write_text(dir / "fidelity.md", table_markdown(fid));
    detail::write_text(dir / "fidelity.csv", table_csv(fid));
    detail::write_text(dir / "diversity.md", table_markdown(div));
    detail::write_text(dir / "diversity.csv", table_csv(div));
    export_curves(results.curves, dir);
    detail::write_text(dir / "curves.json", curves_bundle(results).dump(1) + "\n");
    detail::write_text(dir / "verdicts.json", nlohmann::json(results.verdicts).dump(1) + "\n");
    detail::write_text(dir / diagnostics_file, diagnostics(results).dump(1) + "\n");
    detail::write_text(dir / "provenance.json", nlohmann::json(results.provenance).dump(1) + "\n");
}

} // namespace fds
