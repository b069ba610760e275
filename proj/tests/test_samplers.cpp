#include <fds/ranges.hpp>
#include <fds/samplers.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace fds;

namespace {

RandomSource source(std::uint64_t seed = 1) { return RandomSource(seed, StreamPath{42}); }

} // namespace

TEST(Samplers, HypersphereNorm)
{
    auto const x = sample(HypersphereSurface{8, 1.3}, 500, source());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0;
        for (double v : x.row(i)) s += v * v;
        EXPECT_NEAR(std::sqrt(s), 1.3, 1e-9);
    }
}

TEST(Samplers, HypercubeBounds)
{
    double const t = hypercube_offset_for_overlap(8);
    auto const x = sample(HypercubeUniform{8, t}, 500, source());
    for (double v : x.values()) {
        EXPECT_GE(v, t);
        EXPECT_LE(v, t + 1.0);
    }
}

TEST(Samplers, HypercubeOffsetIdentities)
{
    EXPECT_NEAR(hypercube_offset_for_overlap(1), 0.8, 1e-15);
    EXPECT_NEAR(hypercube_offset_for_overlap(8), 0.1822, 5e-5);
    for (std::size_t d : {1, 2, 8, 64, 128}) {
        double const t = hypercube_offset_for_overlap(d);
        double overlap = 1.0;
        for (std::size_t k = 0; k < d; ++k) overlap *= 1.0 - t;
        EXPECT_NEAR(overlap, 0.2, 1e-12) << d;
    }
    EXPECT_EQ(hypercube_offset_for_overlap(64), 1.0 - std::pow(0.2, 1.0 / 64.0));
}

TEST(Samplers, TorusSurfaceIdentity)
{
    auto const x = sample(TorusCircle{1.0, 0.1}, 100000, source(3));
    double min_norm = INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double const rho = std::hypot(x(i, 0), x(i, 1));
        EXPECT_NEAR((rho - 1.0) * (rho - 1.0) + x(i, 2) * x(i, 2), 0.01, 1e-9);
        min_norm = std::min(min_norm, std::sqrt(rho * rho + x(i, 2) * x(i, 2)));
    }
    EXPECT_GE(min_norm, 0.9 - 1e-12);
    EXPECT_GT(min_norm, 0.8);
}

TEST(Samplers, BallInsideRadius)
{
    auto const x = sample(BallUniform{3, 0.8, false}, 2000, source());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0;
        for (double v : x.row(i)) s += v * v;
        EXPECT_LE(std::sqrt(s), 0.8);
    }
}

TEST(Samplers, ParetoInverseCdf)
{
    std::size_t const n = 10000;
    auto x = sample(Pareto{1.01, 1.0}, n, source(5)).values();
    std::sort(x.begin(), x.end());
    EXPECT_GE(x.front(), 1.0);
    double ks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double const f = 1.0 - std::pow(x[i], -1.01);
        ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    // 1% critical value of the one-sample KS statistic
    EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST(Samplers, RoundedMatchesContinuousStream)
{
    auto const c = sample(ScaledGaussian1D{10.0}, 300, source(9));
    auto const r = sample(RoundedScaledGaussian1D{10.0}, 300, source(9));
    for (std::size_t i = 0; i < 300; ++i) {
        EXPECT_EQ(r(i, 0), std::round(c(i, 0)));
        EXPECT_EQ(r(i, 0), std::floor(r(i, 0)));
    }
}

TEST(Samplers, Deterministic)
{
    DistributionSpec const spec = GaussianMixture{{{0.0, 0.0}, {5.0, 5.0}}, {1.0, 0.5}, {0.3, 0.7}};
    EXPECT_EQ(sample(spec, 400, source(2)), sample(spec, 400, source(2)));
    EXPECT_NE(sample(spec, 400, source(2)), sample(spec, 400, source(3)));
}

TEST(Samplers, MixtureWeights)
{
    DistributionSpec const spec = GaussianMixture{{{-100.0}, {100.0}}, {1.0, 1.0}, {0.25, 0.75}};
    auto const x = sample(spec, 20000, source(4));
    std::size_t right = 0;
    for (double v : x.values()) right += v > 0;
    EXPECT_NEAR(right / 20000.0, 0.75, 0.015);
}

TEST(Samplers, OutlierIsLastRow)
{
    auto const spec = with_outlier(IsotropicGaussian{{0.0, 0.0}, 1.0}, {3.0, 3.0});
    EXPECT_EQ(sample_rows(spec, 10), 11u);
    auto const x = sample(spec, 10, source());
    EXPECT_EQ(x.size(), 11u);
    EXPECT_EQ(x(10, 0), 3.0);
    EXPECT_EQ(x(10, 1), 3.0);
    auto const y = inject_outlier(sample(IsotropicGaussian{{0.0}, 1.0}, 5, source()), std::vector<double>{7.0});
    EXPECT_EQ(y.size(), 6u);
    EXPECT_EQ(y(5, 0), 7.0);
}

TEST(Samplers, ProductDimension)
{
    DistributionSpec const spec = ProductOf{{IsotropicGaussian{{0.0}, 1.0}, Pareto{1.01, 1.0}, TorusCircle{}}};
    EXPECT_EQ(dimension(spec), 5u);
    auto const x = sample(spec, 50, source());
    EXPECT_EQ(x.dim(), 5u);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_GE(x(i, 1), 1.0);
}

TEST(Samplers, InvalidSpecsRejected)
{
    EXPECT_THROW(validate(DistributionSpec{IsotropicGaussian{{0.0}, -1.0}}), PreconditionError);
    EXPECT_THROW(validate(DistributionSpec{GaussianMixture{{{0.0}}, {1.0}, {0.5}}}), PreconditionError);
    EXPECT_THROW(validate(DistributionSpec{Pareto{0.0, 1.0}}), PreconditionError);
    EXPECT_THROW(validate(DistributionSpec{TorusCircle{0.1, 1.0}}), PreconditionError);
}

TEST(Samplers, SpecJsonRoundTrip)
{
    std::vector<DistributionSpec> const specs{
        IsotropicGaussian{{1.0, 2.0}, 0.5},
        GaussianMixture{{{0.0}, {1.0}}, {1.0, 2.0}, {0.5, 0.5}},
        HypersphereSurface{4, 1.5},
        HypercubeUniform{3, 0.25},
        BallUniform{3, 0.8, true},
        TorusCircle{1.0, 0.1},
        Pareto{1.01, 2.0},
        ScaledGaussian1D{3.0},
        RoundedScaledGaussian1D{3.0},
        ProductOf{{ScaledGaussian1D{1.0}, Pareto{}}},
        with_outlier(IsotropicGaussian{{0.0}, 1.0}, {6.0}),
    };
    for (auto const& s : specs) {
        nlohmann::json const j = s;
        EXPECT_EQ(j.get<DistributionSpec>(), s) << j.dump();
    }
}

TEST(TvBounds, ClosedForms)
{
    auto const zero = gaussian_tv_bounds_mean_shift(0.0, 8);
    EXPECT_EQ(zero.lower, 0.0);
    EXPECT_EQ(zero.upper, 0.0);
    EXPECT_GE(gaussian_tv_bounds_mean_shift(6.0, 1).lower, 0.98);
    EXPECT_EQ(gaussian_tv_bounds_std_ratio(1.0, 64).upper, 0.0);
}

TEST(TvBounds, BracketNumericTv)
{
    auto const trials = tv_bracket_trials(20, 11);
    ASSERT_EQ(trials.size(), 20u);
    for (auto const& b : trials) {
        EXPECT_TRUE(b.ok) << b.tv << " not in [" << b.bounds.lower << ", " << b.bounds.upper << "]";
    }
}

TEST(TvBounds, NumericTvAgainstErfClosedForm)
{
    // equal variances: TV = 2 Phi(|dmu| / (2 sigma)) - 1
    for (double dmu : {0.1, 1.0, 3.0, 7.5}) {
        for (double s : {0.2, 1.0, 4.0}) {
            double const want = std::erf(dmu / (2.0 * s) / std::sqrt(2.0));
            EXPECT_NEAR(gaussian_tv_1d_numeric(0.0, s, dmu, s), want, 1e-9);
        }
    }
}

TEST(TvBounds, SweepExtremesSeparated)
{
    auto const extremes = sweep_extreme_bounds(build_check_catalog(CatalogOptions::fast()));
    EXPECT_EQ(extremes.size(), 2u * (3 + 6 + 3 + 1));
    for (auto const& e : extremes) EXPECT_TRUE(e.separated) << e.check << "/" << e.variant << " at " << e.parameter;
}
