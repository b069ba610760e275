#include <fds/criteria.hpp>

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace fds;

namespace {

ShapeResult eval(std::vector<double> v, ShapeCriterion c) { return eval_shape(v, c); }

Curve curve(std::string variant, MetricId m, std::vector<double> mean)
{
    Curve c;
    c.check = "test";
    c.variant = std::move(variant);
    c.metric = m;
    c.x.resize(mean.size());
    c.values = {mean};
    c.mean = std::move(mean);
    c.errors.assign(c.x.size(), {});
    return c;
}

} // namespace

TEST(Shapes, BellExample)
{
    EXPECT_TRUE(eval({0.0, 0.3, 1.0, 0.4, 0.0}, Bell{0.5}).pass);
    EXPECT_FALSE(eval({0.0, 0.3, 1.0, 0.4, 0.3}, Bell{0.5}).pass);  // right end 0.3 above min
    EXPECT_FALSE(eval({0.0, 1.0, 0.8, 0.4, 0.0}, Bell{0.5}).pass);  // peak off centre
    EXPECT_FALSE(eval({0.0, 0.1, 0.15, 0.1, 0.0}, Bell{0.5}).pass); // too shallow
}

TEST(Shapes, Horizontal)
{
    EXPECT_TRUE(eval({0.50, 0.52, 0.51}, Horizontal{}).pass);
    EXPECT_NEAR(eval({0.50, 0.52, 0.51}, Horizontal{}).margin, 0.03, 1e-12);
    EXPECT_FALSE(eval({0.5, 0.6, 0.55}, Horizontal{}).pass);
    EXPECT_THROW(eval({0.5, 0.6}, Horizontal{}), PreconditionError);
}

TEST(Shapes, HighToLowWithDrop)
{
    EXPECT_TRUE(eval({1.0, 1.0, 0.8, 0.4, 0.1}, HighToLowWithDrop{0.5, 0.1}).pass);
    EXPECT_FALSE(eval({1.0, 1.0, 0.95, 0.4, 0.1}, HighToLowWithDrop{0.5, 0.1}).pass);
    EXPECT_TRUE(eval({1.0, 1.0, 0.95, 0.4, 0.1}, HighToLow{}).pass);
}

TEST(Shapes, Monotone)
{
    EXPECT_TRUE(eval({0.1, 0.2, 0.5}, LowToHigh{}).pass);
    EXPECT_FALSE(eval({0.1, 0.61, 0.5}, LowToHigh{}).pass); // right end more than 0.1 below max
    EXPECT_TRUE(eval({0.1, 0.6, 0.5}, LowToHigh{}).pass);   // boundary passes
    EXPECT_FALSE(eval({0.1, 0.2, 0.25}, LowToHigh{}).pass);
    EXPECT_TRUE(eval({0.9, 0.5, 0.2}, HighToLow{}).pass);
    EXPECT_FALSE(eval({0.2, 0.5, 0.9}, HighToLow{}).pass);
}

TEST(Shapes, PointCloseBoundary)
{
    EXPECT_TRUE(eval({0.951, 0, 0}, PointClose{0.0, 1.0, 0.05}).pass);
    EXPECT_FALSE(eval({0.949, 0, 0}, PointClose{0.0, 1.0, 0.05}).pass);
    EXPECT_TRUE(eval({0.95, 0, 0}, PointClose{0.0, 1.0, 0.05}).pass);
}

TEST(Shapes, Converging)
{
    EXPECT_TRUE(eval({0.0, 0.9, 0.5, 0.52, 0.53}, Converging{0.5}).pass);
    EXPECT_FALSE(eval({0.0, 0.9, 0.5, 0.6, 0.53}, Converging{0.5}).pass);
}

TEST(Shapes, NanOnlyMattersWhereRead)
{
    double const nan = std::nan("");
    EXPECT_TRUE(eval({nan, 0.3, 1.0}, PointClose{1.0, 1.0, 0.05}).pass);
    EXPECT_FALSE(eval({nan, 0.3, 1.0}, Converging{0.5}).pass);
    EXPECT_FALSE(eval({nan, 0.3, 1.0}, Converging{0.5}).error);
    EXPECT_TRUE(eval({nan, 0.3, 1.0}, Horizontal{}).error);
}

TEST(Shapes, QuantileIndex)
{
    EXPECT_EQ(quantile_index(0.5, 13), 6u);
    EXPECT_EQ(quantile_index(0.5, 10), 5u); // 4.5 rounds up
    EXPECT_EQ(quantile_index(0.0, 13), 0u);
    EXPECT_EQ(quantile_index(1.0, 13), 12u);
    EXPECT_EQ(quantile_index(4.0 / 9.0, 10), 4u);
    EXPECT_EQ(quantile_index(0.95, 10), 9u);
}

TEST(Shapes, InvariantToRepeatsWithSameMean)
{
    auto a = curve("v", MetricId::iprec, {0.0, 0.5, 1.0, 0.5, 0.0});
    auto b = a;
    b.values = {{0.0, 0.4, 1.0, 0.6, 0.0}, {0.0, 0.6, 1.0, 0.4, 0.0}};
    CriteriaEntry const e{"row", Desideratum::d1b, MetricKind::fidelity, {{Bell{0.5}}, std::nullopt}, {}, true};
    EXPECT_EQ(eval_entry(e, MetricId::iprec, {&a}, {"v"}).outcome, eval_entry(e, MetricId::iprec, {&b}, {"v"}).outcome);
}

TEST(Classification, Cases)
{
    std::vector<VariantResult> high{{"a", true, false}, {"b", true, false}};
    std::vector<VariantResult> low{{"a", false, true}, {"b", false, true}};
    std::vector<VariantResult> mixed{{"a", true, false}, {"b", false, true}};
    std::vector<VariantResult> both{{"a", true, true}};
    EXPECT_EQ(classify_diversity_variant(high), Outcome::high);
    EXPECT_EQ(classify_diversity_variant(low), Outcome::low);
    EXPECT_EQ(classify_diversity_variant(mixed), Outcome::fail);
    EXPECT_EQ(classify_diversity_variant(both), Outcome::high);
    EXPECT_THROW(classify_diversity_variant({}), PreconditionError);
}

TEST(Verdicts, AllVariantsMustPass)
{
    CriteriaEntry const e{"row", Desideratum::d1b, MetricKind::fidelity, {{Horizontal{}}, std::nullopt}, {}, true};
    auto const a = curve("a", MetricId::iprec, {0.5, 0.5, 0.5});
    auto const b = curve("b", MetricId::iprec, {0.5, 0.9, 0.5});
    EXPECT_EQ(eval_entry(e, MetricId::iprec, {&a, &b}, {"a"}).outcome, Outcome::pass);
    EXPECT_EQ(eval_entry(e, MetricId::iprec, {&a, &b}, {"a", "b"}).outcome, Outcome::fail);
}

TEST(Verdicts, MissingCurveFailsWithDiagnostic)
{
    CriteriaEntry const e{"row", Desideratum::d1b, MetricKind::fidelity, {{Horizontal{}}, std::nullopt}, {}, true};
    auto const a = curve("a", MetricId::iprec, {0.5, 0.5, 0.5});
    auto const v = eval_entry(e, MetricId::iprec, {&a}, {"a", "b"});
    EXPECT_EQ(v.outcome, Outcome::fail);
    EXPECT_NE(v.diagnostic.find("'b'"), std::string::npos);
}

TEST(Verdicts, ErrorNamesGridIndex)
{
    CriteriaEntry const e{"row", Desideratum::d1b, MetricKind::fidelity, {{Horizontal{}}, std::nullopt}, {}, true};
    auto a = curve("a", MetricId::iprec, {0.5, 0.5, 0.5});
    a.mean[1] = std::nan("");
    a.errors[1] = "boom";
    auto const v = eval_entry(e, MetricId::iprec, {&a}, {"a"});
    EXPECT_EQ(v.outcome, Outcome::error);
    EXPECT_NE(v.diagnostic.find("grid index 1: boom"), std::string::npos) << v.diagnostic;
}

TEST(Verdicts, InconsistentDiversityFails)
{
    CriteriaEntry const e{"row", Desideratum::d1b, MetricKind::diversity,
                          {{LowToHigh{}}, std::vector<ShapeCriterion>{Bell{0.5}}}, {}, true};
    auto const d1 = curve("d1", MetricId::irec, {0.0, 1.0, 0.0});   // low
    auto const d8 = curve("d8", MetricId::irec, {0.0, 0.5, 1.0});   // high
    auto const d8b = curve("d8", MetricId::irec, {0.0, 1.0, 0.05}); // low
    EXPECT_EQ(eval_entry(e, MetricId::irec, {&d1, &d8}, {"d1", "d8"}).outcome, Outcome::fail);
    EXPECT_EQ(eval_entry(e, MetricId::irec, {&d1, &d8b}, {"d1", "d8"}).outcome, Outcome::low);
    EXPECT_EQ(eval_entry(e, MetricId::irec, {&d8}, {"d8"}).outcome, Outcome::high);
    auto plain = e;
    plain.report_type = false;
    EXPECT_EQ(eval_entry(plain, MetricId::irec, {&d8}, {"d8"}).outcome, Outcome::pass);
}

TEST(Verdicts, SymbolsRoundTrip)
{
    for (Outcome o : {Outcome::pass, Outcome::fail, Outcome::high, Outcome::low, Outcome::error})
        EXPECT_EQ(outcome_from_symbol(outcome_symbol(o)), o);
    EXPECT_THROW(outcome_from_symbol('X'), PreconditionError);
}

TEST(CriteriaTable, DesiderataMatchCheckTable)
{
    std::map<std::string, std::set<Desideratum>> const expected{
        {"Gaussian Mean Difference", {Desideratum::d1b, Desideratum::d4}},
        {"Gaussian Mean Difference + Outlier", {Desideratum::d1b, Desideratum::d4}},
        {"Gaussian Std. Deviation Difference", {Desideratum::d1b, Desideratum::d4}},
        {"One Disjoint Dim. + Many Identical Dim.", {Desideratum::d1b, Desideratum::d4}},
        {"Scaling One Dimension", {Desideratum::d4, Desideratum::d5}},
        {"Mode Collapse", {Desideratum::d1b, Desideratum::d4}},
        {"Mode Dropping + Invention", {Desideratum::d1b, Desideratum::d4}},
        {"Sequential Mode Dropping", {Desideratum::d1b, Desideratum::d4}},
        {"Simultaneous Mode Dropping", {Desideratum::d1b, Desideratum::d4}},
        {"Hypercube, Varying Sample Size", {Desideratum::d3, Desideratum::d1b}},
        {"Hypercube, Varying Syn. Size", {Desideratum::d2, Desideratum::d1b}},
        {"Hypersphere Surface", {Desideratum::d1b, Desideratum::d4}},
        {"Sphere vs. Torus", {Desideratum::d1b, Desideratum::d4}},
        {"Discrete Num. vs. Continuous Num.", {Desideratum::d1b, Desideratum::d4}},
        {"Gaussian Mean Difference + Pareto", {Desideratum::d1b, Desideratum::d4}},
    };
    std::map<std::string, std::set<Desideratum>> got;
    std::set<std::tuple<std::string, Desideratum, MetricKind>> seen;
    for (auto const& e : build_criteria()) {
        got[e.row].insert(e.desideratum);
        EXPECT_TRUE(seen.insert({e.row, e.desideratum, e.kind}).second) << "duplicate entry " << e.row;
        EXPECT_TRUE(find_row(e.row).has_value()) << e.row;
        if (e.kind == MetricKind::fidelity) EXPECT_FALSE(e.dual()) << e.row;
    }
    EXPECT_EQ(got, expected);
    EXPECT_EQ(seen.size(), 2 * 2 * expected.size());
}

TEST(CriteriaTable, RowsReferToCatalogVariants)
{
    EXPECT_EQ(table_rows().size(), 15u);
    auto const seq = find_row("Sequential Mode Dropping");
    ASSERT_TRUE(seq);
    EXPECT_EQ(seq->check, "mode_dropping");
    EXPECT_EQ(seq->variant_prefix, "sequential_");
    EXPECT_TRUE(find_row("Discrete Num. vs. Continuous Num.")->tabular_only);
    EXPECT_FALSE(find_row("No Such Row"));
}

TEST(CriteriaTable, SerializesToJson)
{
    nlohmann::json const j = build_criteria();
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j[0].at("desideratum"), "D1b");
    EXPECT_EQ(j[0].at("rule").at("high")[0].at("shape"), "bell");
}
