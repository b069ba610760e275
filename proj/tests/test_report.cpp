#include <fds/report.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

using namespace fds;

namespace {

SuiteResults const& gmd_run()
{
    static SuiteResults const res = [] {
        SuiteConfig cfg;
        cfg.seed = 3;
        cfg.repeats = 1;
        cfg.size = 300;
        cfg.checks = {"gaussian_mean_difference"};
        cfg.faults = {{"gaussian_mean_difference", "d1", 6, MetricId::density}};
        auto checks = select_checks(cfg);
        checks[0].variants = {checks[0].variant("d1")};
        return run_suite(cfg, checks);
    }();
    return res;
}

std::filesystem::path scratch(std::string const& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("fds_report_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::size_t count_lines(std::string const& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST(Report, CurvesCsvShape)
{
    auto const text = curves_csv(gmd_run().curves);
    EXPECT_EQ(text.substr(0, text.find('\n')), "check,variant,metric,x,mean,repeat_0");
    EXPECT_EQ(count_lines(text), 1 + 13u * 12u);
    EXPECT_NE(text.find("gaussian_mean_difference,d1,density,0,nan,nan"), std::string::npos);
}

TEST(Report, FidelityTableAlphabet)
{
    auto const t = render_table(gmd_run(), MetricKind::fidelity);
    EXPECT_EQ(t.metrics.size(), 6u);
    ASSERT_FALSE(t.rows.empty());
    for (auto const& r : t.rows) {
        EXPECT_EQ(r.check, "Gaussian Mean Difference");
        for (char c : r.cells) EXPECT_TRUE(c == 'T' || c == 'F' || c == 'E') << c;
    }
    auto const div = render_table(gmd_run(), MetricKind::diversity);
    for (auto const& r : div.rows)
        for (char c : r.cells) EXPECT_NE(std::string("THLFE").find(c), std::string::npos) << c;
}

TEST(Report, InjectedFaultShowsAsErrorWithFootnote)
{
    auto const t = render_table(gmd_run(), MetricKind::fidelity);
    EXPECT_EQ(t.cell("Gaussian Mean Difference", Desideratum::d1b, MetricId::density), 'E');
    EXPECT_TRUE(t.has_errors());
    auto const md = table_markdown(t);
    EXPECT_NE(md.find("| Desideratum | Sanity check | Tab. |"), std::string::npos);
    EXPECT_NE(md.find("\nE: "), std::string::npos);
    EXPECT_NE(md.find(std::string(diagnostics_file)), std::string::npos);
}

TEST(Report, TableCsvRoundTrip)
{
    for (auto kind : {MetricKind::fidelity, MetricKind::diversity}) {
        auto const t = render_table(gmd_run(), kind);
        auto const csv = table_csv(t);
        auto const back = parse_table_csv(csv);
        EXPECT_EQ(table_csv(back), csv);
        EXPECT_EQ(back.metrics, t.metrics);
        ASSERT_EQ(back.rows.size(), t.rows.size());
        for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(back.rows[i].cells, t.rows[i].cells);
    }
}

TEST(Report, TableCsvRejectsMalformedInput)
{
    EXPECT_THROW(parse_table_csv(""), SchemaError);
    EXPECT_THROW(parse_table_csv("row,check,tab\n"), SchemaError);
    EXPECT_THROW(parse_table_csv("desideratum,check,tab,nope\n"), SchemaError);
    EXPECT_THROW(parse_table_csv("desideratum,check,tab,iprec\nD1b,x,0\n"), SchemaError);
    EXPECT_THROW(parse_table_csv("desideratum,check,tab,iprec\nD1b,\"x,0,T\n"), SchemaError);
}

TEST(Report, QuotedCheckLabels)
{
    VerdictTable t;
    t.kind = MetricKind::fidelity;
    t.metrics = {MetricId::iprec};
    t.rows.push_back({Desideratum::d4, "Comma, \"quoted\"", true, {'T'}});
    auto const back = parse_table_csv(table_csv(t));
    ASSERT_EQ(back.rows.size(), 1u);
    EXPECT_EQ(back.rows[0].check, t.rows[0].check);
    EXPECT_TRUE(back.rows[0].tabular);
}

TEST(Report, BundleReloadReexportsIdentically)
{
    auto const bundle = curves_bundle(gmd_run());
    EXPECT_FALSE(bundle.at("config").contains("workers"));
    auto const loaded = load_curves_bundle(nlohmann::json::parse(bundle.dump()));
    ASSERT_EQ(loaded.curves.size(), gmd_run().curves.size());
    EXPECT_EQ(curves_csv(loaded.curves), curves_csv(gmd_run().curves));
    EXPECT_EQ(nlohmann::json(loaded.config).dump(), nlohmann::json(gmd_run().config).dump());

    auto const a = scratch("a"), b = scratch("b");
    export_curves(gmd_run().curves, a);
    export_curves(loaded.curves, b);
    auto const file = std::filesystem::path("curves") / "gaussian_mean_difference.csv";
    EXPECT_EQ(detail::read_text(a / file), detail::read_text(b / file));
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Report, BundleRejectsWrongVersion)
{
    auto bundle = curves_bundle(gmd_run());
    bundle["version"] = 99;
    EXPECT_THROW(load_curves_bundle(bundle), SchemaError);
    bundle = curves_bundle(gmd_run());
    bundle["curves"][0]["mean"].erase(0);
    EXPECT_THROW(load_curves_bundle(bundle), SchemaError);
}

TEST(Report, WriteResultsLayout)
{
    auto const dir = scratch("out");
    write_results(gmd_run(), dir);
    for (char const* f : {"fidelity.md", "fidelity.csv", "diversity.md", "diversity.csv", "curves.json",
                          "verdicts.json", "diagnostics.json", "provenance.json", "curves/gaussian_mean_difference.csv"})
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;

    auto const diag = nlohmann::json::parse(detail::read_text(dir / "diagnostics.json"));
    ASSERT_EQ(diag.at("curve_points").size(), 1u);
    auto const& p = diag["curve_points"][0];
    EXPECT_EQ(p.at("metric"), "density");
    EXPECT_EQ(p.at("grid"), 6);
    EXPECT_EQ(p.at("x"), 0.0);
    EXPECT_NE(p.at("error").get<std::string>().find("injected fault"), std::string::npos);
    EXPECT_FALSE(diag.at("verdicts").empty());
    std::filesystem::remove_all(dir);
}
