#pragma once

#include <fds/dataset.hpp>
#include <fds/embed.hpp>
#include <fds/error.hpp>
#include <fds/metrics.hpp>
#include <fds/random.hpp>
#include <fds/samplers.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// Check specifications
// ---------------------------------------------------------------------------

enum class GridScale : std::uint8_t
{
    linear,
    log,
    integer,
};

NLOHMANN_JSON_SERIALIZE_ENUM(GridScale, {{GridScale::linear, "linear"}, {GridScale::log, "log"}, {GridScale::integer, "integer"}})

struct GridPoint
{
    DistributionSpec real;
    DistributionSpec synthetic;
    std::size_t real_size = 1000;
    std::size_t synthetic_size = 1000;

    friend bool operator==(GridPoint const&, GridPoint const&) = default;
};

struct CheckVariant
{
    std::string id;
    /// Table row this variant contributes to.
    std::string row;
    std::string parameter;
    GridScale scale = GridScale::linear;
    std::vector<double> grid;
    std::vector<GridPoint> points;

    friend bool operator==(CheckVariant const&, CheckVariant const&) = default;
};

struct CheckSpec
{
    std::string id;
    std::string title;
    bool tabular_only = false;
    std::size_t repeats = 10;
    std::vector<CheckVariant> variants;

    CheckVariant const& variant(std::string_view variant_id) const
    {
        for (auto const& v : variants)
            if (v.id == variant_id) return v;
        throw PreconditionError("check '" + id + "' has no variant '" + std::string(variant_id) + "'");
    }

    friend bool operator==(CheckSpec const&, CheckSpec const&) = default;
};

/// Throws PreconditionError on the first violated invariant.
inline void validate(CheckSpec const& spec)
{
    detail::require(!spec.id.empty(), "check id must not be empty");
    detail::require(spec.repeats >= 1, "check '" + spec.id + "' needs at least one repeat");
    detail::require(!spec.variants.empty(), "check '" + spec.id + "' has no variants");
    for (auto const& v : spec.variants) {
        std::string const where = "check '" + spec.id + "' variant '" + v.id + "'";
        detail::require(v.grid.size() >= 3, where + " needs at least 3 grid points");
        detail::require(v.points.size() == v.grid.size(), where + " needs one grid point spec per grid value");
        bool up = true, down = true;
        for (std::size_t i = 1; i < v.grid.size(); ++i) {
            up = up && v.grid[i] > v.grid[i - 1];
            down = down && v.grid[i] < v.grid[i - 1];
        }
        detail::require(up || down, where + " grid is not strictly monotone");
        for (auto const& p : v.points) {
            validate(p.real);
            validate(p.synthetic);
            detail::require(dimension(p.real) == dimension(p.synthetic), where + " mixes dimensions");
            detail::require(p.real_size >= 2 && p.synthetic_size >= 1, where + " has empty datasets");
        }
    }
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

struct CatalogOptions
{
    /// Points of every continuous sweep; odd so symmetric sweeps hit their midpoint.
    std::size_t grid_points = 13;
    /// Dataset size wherever the size is not the swept variable.
    std::size_t size = 1000;
    std::size_t repeats = 10;

    /// Smoke-test settings: 7 grid points and 5 repeats.
    static CatalogOptions fast() { return {7, 1000, 5}; }
};

namespace detail {

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n % 2 == 1) g[n / 2] = 0.5 * (lo + hi);
    g.back() = hi;
    return g;
}

/// 10^e for e evenly spaced over [lo_exp, hi_exp].
inline std::vector<double> log_grid(double lo_exp, double hi_exp, std::size_t n)
{
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double e = lo_exp + (hi_exp - lo_exp) * static_cast<double>(i) / static_cast<double>(n - 1);
        if (n % 2 == 1 && i == n / 2) e = 0.5 * (lo_exp + hi_exp);
        g[i] = std::pow(10.0, e);
    }
    return g;
}

inline std::vector<double> rounded_log_grid(double lo_exp, double hi_exp, std::size_t n)
{
    auto g = log_grid(lo_exp, hi_exp, n);
    for (double& v : g) v = std::round(v);
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

inline std::vector<double> filled(std::size_t d, double v) { return std::vector<double>(d, v); }

inline std::string dim_variant(std::size_t d) { return "d" + std::to_string(d); }

inline GridPoint point(DistributionSpec real, DistributionSpec synthetic, std::size_t nr, std::size_t ng)
{
    return GridPoint{std::move(real), std::move(synthetic), nr, ng};
}

inline CheckVariant make_variant(std::string id, std::string row, std::string parameter, GridScale scale,
                                 std::vector<double> grid)
{
    CheckVariant v;
    v.id = std::move(id);
    v.row = std::move(row);
    v.parameter = std::move(parameter);
    v.scale = scale;
    v.grid = std::move(grid);
    return v;
}

inline double gaussian_mean_range(std::size_t d) { return d == 1 ? 6.0 : d == 8 ? 3.0 : 1.0; }

inline double gaussian_std_exponent(std::size_t d) { return d == 1 ? 3.0 : d == 8 ? 1.0 : 0.5; }

inline double mode_sigma(std::size_t d) { return d == 1 ? 1.0 / 6.0 : d == 8 ? 1.0 / 3.0 : 1.0; }

/// Ten modes with means evenly spaced from 0 to 10 * 1_d.
inline std::vector<std::vector<double>> mode_means(std::size_t d)
{
    std::vector<std::vector<double>> means;
    for (std::size_t c = 0; c < 10; ++c) means.push_back(filled(d, 10.0 * static_cast<double>(c) / 9.0));
    return means;
}

inline GaussianMixture mixture(std::vector<std::vector<double>> means, double sigma, std::vector<double> weights)
{
    std::vector<double> sigmas(means.size(), sigma);
    return GaussianMixture{std::move(means), std::move(sigmas), std::move(weights)};
}

/// Seed of the mode dropping + invention components. Independent of the
/// master seed so every run uses the same ten components.
inline constexpr std::uint64_t invention_component_seed = 20240611;

} // namespace detail

/// The ten 2-D component means of the mode dropping + invention check.
inline std::vector<std::vector<double>> invention_component_means()
{
    auto const points = sample(IsotropicGaussian{{0.0, 0.0}, 10.0}, 10,
                               RandomSource(detail::invention_component_seed, StreamPath{}.child("components")));
    std::vector<std::vector<double>> means;
    for (std::size_t c = 0; c < 10; ++c) means.push_back({points(c, 0), points(c, 1)});
    return means;
}

inline std::vector<CheckSpec> build_check_catalog(CatalogOptions const& opt = {})
{
    detail::require(opt.grid_points >= 3 && opt.grid_points % 2 == 1, "grid resolution must be odd and at least 3");
    detail::require(opt.size >= 2, "dataset size must be at least 2");
    detail::require(opt.repeats >= 1, "repeats must be at least 1");
    using namespace detail;
    std::size_t const n = opt.size;
    std::size_t const g = opt.grid_points;
    std::vector<CheckSpec> catalog;
    auto add = [&](std::string id, std::string title, bool tabular) -> CheckSpec& {
        catalog.push_back(CheckSpec{std::move(id), std::move(title), tabular, opt.repeats, {}});
        return catalog.back();
    };
    std::array<std::size_t, 3> const dims{1, 8, 64};

    {
        auto& c = add("gaussian_mean_difference", "Gaussian mean difference", false);
        for (std::size_t d : dims) {
            double const m = gaussian_mean_range(d);
            auto v = make_variant(dim_variant(d), "Gaussian Mean Difference", "mu", GridScale::linear,
                                  linear_grid(-m, m, g));
            for (double mu : v.grid)
                v.points.push_back(point(IsotropicGaussian{filled(d, 0.0), 1.0}, IsotropicGaussian{filled(d, mu), 1.0},
                                         n, n));
            c.variants.push_back(std::move(v));
        }
    }
    {
        auto& c = add("gaussian_mean_difference_outlier", "Gaussian mean difference with one outlier", false);
        for (Role role : {Role::real, Role::synthetic}) {
            for (std::size_t d : dims) {
                double const m = gaussian_mean_range(d);
                auto v = make_variant(std::string(to_string(role)) + "_" + dim_variant(d),
                                      "Gaussian Mean Difference + Outlier", "mu", GridScale::linear,
                                      linear_grid(-m, m, g));
                auto const outlier = filled(d, m);
                for (double mu : v.grid) {
                    DistributionSpec real = IsotropicGaussian{filled(d, 0.0), 1.0};
                    DistributionSpec syn = IsotropicGaussian{filled(d, mu), 1.0};
                    if (role == Role::real)
                        real = with_outlier(real, outlier);
                    else
                        syn = with_outlier(syn, outlier);
                    v.points.push_back(point(real, syn, n, n));
                }
                c.variants.push_back(std::move(v));
            }
        }
    }
    {
        auto& c = add("gaussian_std_difference", "Gaussian standard deviation difference", false);
        for (std::size_t d : dims) {
            double const e = gaussian_std_exponent(d);
            auto v = make_variant(dim_variant(d), "Gaussian Std. Deviation Difference", "sigma", GridScale::log,
                                  log_grid(-e, e, g));
            for (double s : v.grid)
                v.points.push_back(
                    point(IsotropicGaussian{filled(d, 0.0), 1.0}, IsotropicGaussian{filled(d, 0.0), s}, n, n));
            c.variants.push_back(std::move(v));
        }
    }
    {
        auto& c = add("mode_dropping", "Sequential and simultaneous mode dropping", false);
        for (std::size_t d : dims) {
            auto const means = mode_means(d);
            double const sigma = mode_sigma(d);
            auto const real = mixture(means, sigma, std::vector<double>(10, 0.1));
            std::vector<double> dropped(10);
            for (std::size_t i = 0; i < 10; ++i) dropped[i] = static_cast<double>(i);
            auto v = make_variant("sequential_" + dim_variant(d), "Sequential Mode Dropping", "dropped",
                                  GridScale::integer, dropped);
            for (std::size_t m = 0; m < 10; ++m) {
                std::size_t const kept = 10 - m;
                std::vector<std::vector<double>> kept_means(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(kept));
                auto const syn = mixture(kept_means, sigma, std::vector<double>(kept, 1.0 / static_cast<double>(kept)));
                v.points.push_back(point(real, syn, n, n));
            }
            c.variants.push_back(std::move(v));
        }
        for (std::size_t d : dims) {
            auto const means = mode_means(d);
            double const sigma = mode_sigma(d);
            auto const real = mixture(means, sigma, std::vector<double>(10, 0.1));
            std::vector<double> factors(10);
            for (std::size_t i = 0; i < 10; ++i) factors[i] = 1.0 - static_cast<double>(i) / 9.0;
            factors.back() = 0.0;
            auto v = make_variant("simultaneous_" + dim_variant(d), "Simultaneous Mode Dropping", "factor",
                                  GridScale::linear, factors);
            for (double f : factors) {
                std::vector<double> w(10, f / (1.0 + 9.0 * f));
                w[0] = 1.0 / (1.0 + 9.0 * f);
                v.points.push_back(point(real, mixture(means, sigma, w), n, n));
            }
            c.variants.push_back(std::move(v));
        }
    }
    {
        auto& c = add("mode_dropping_invention", "Mode dropping and invention", false);
        auto const all = invention_component_means();
        std::vector<std::vector<double>> const real_means(all.begin(), all.begin() + 5);
        auto const real = mixture(real_means, 0.25, std::vector<double>(5, 0.2));
        std::vector<double> counts(10);
        for (std::size_t i = 0; i < 10; ++i) counts[i] = static_cast<double>(i + 1);
        auto v = make_variant("d2", "Mode Dropping + Invention", "components", GridScale::integer, counts);
        for (std::size_t k = 1; k <= 10; ++k) {
            std::vector<std::vector<double>> syn_means(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
            v.points.push_back(
                point(real, mixture(syn_means, 0.25, std::vector<double>(k, 1.0 / static_cast<double>(k))), n, n));
        }
        c.variants.push_back(std::move(v));
    }
    {
        auto& c = add("hypersphere_surface", "Hypersphere surface", false);
        for (std::size_t d : {std::size_t{2}, std::size_t{8}, std::size_t{128}}) {
            auto v = make_variant(dim_variant(d), "Hypersphere Surface", "r", GridScale::linear, linear_grid(0.1, 1.9, g));
            for (double r : v.grid)
                v.points.push_back(point(HypersphereSurface{d, 1.0}, HypersphereSurface{d, r}, n, n));
            c.variants.push_back(std::move(v));
        }
    }
    {
        auto& both = add("hypercube_sample_size", "Hypercube, varying sample size", false);
        for (std::size_t d : dims) {
            double const t = hypercube_offset_for_overlap(d, 0.2);
            auto v = make_variant(dim_variant(d), "Hypercube, Varying Sample Size", "size", GridScale::log,
                                  rounded_log_grid(2.0, 4.0, g));
            for (double s : v.grid) {
                auto const size = static_cast<std::size_t>(s);
                v.points.push_back(point(HypercubeUniform{d, 0.0}, HypercubeUniform{d, t}, size, size));
            }
            both.variants.push_back(std::move(v));
        }
        auto& syn = add("hypercube_synthetic_size", "Hypercube, varying synthetic size", false);
        for (std::size_t d : dims) {
            double const t = hypercube_offset_for_overlap(d, 0.2);
            auto v = make_variant(dim_variant(d), "Hypercube, Varying Syn. Size", "synthetic_size", GridScale::log,
                                  rounded_log_grid(2.0, 4.0, g));
            for (double s : v.grid)
                v.points.push_back(
                    point(HypercubeUniform{d, 0.0}, HypercubeUniform{d, t}, n, static_cast<std::size_t>(s)));
            syn.variants.push_back(std::move(v));
        }
    }
    {
        auto& c = add("sphere_torus", "Sphere vs. torus", false);
        DistributionSpec const sphere = BallUniform{3, 0.8, false};
        DistributionSpec const torus = TorusCircle{1.0, 0.1};
        for (bool sphere_real : {true, false}) {
            auto v = make_variant(sphere_real ? "sphere_real" : "torus_real", "Sphere vs. Torus", "synthetic_size",
                                  GridScale::log, rounded_log_grid(2.0, 4.0, g));
            for (double s : v.grid)
                v.points.push_back(point(sphere_real ? sphere : torus, sphere_real ? torus : sphere, n,
                                         static_cast<std::size_t>(s)));
            c.variants.push_back(std::move(v));
        }
    }
    {
        auto& c = add("mode_collapse", "Mode collapse", false);
        for (std::size_t d : dims) {
            auto v = make_variant(dim_variant(d), "Mode Collapse", "mu", GridScale::linear, linear_grid(0.0, 5.0, g));
            for (double mu : v.grid) {
                auto const real = mixture({filled(d, -0.5 * mu), filled(d, 0.5 * mu)}, 1.0, {0.5, 0.5});
                v.points.push_back(point(real, IsotropicGaussian{filled(d, 0.0), std::sqrt(1.0 + mu * mu)}, n, n));
            }
            c.variants.push_back(std::move(v));
        }
    }
    {
        auto& c = add("scaling_one_dimension", "Scaling one dimension", false);
        auto v = make_variant("d2", "Scaling One Dimension", "s", GridScale::log, log_grid(-3.0, 3.0, g));
        for (double s : v.grid) {
            DistributionSpec real = ProductOf{{IsotropicGaussian{{0.0}, 1.0}, ScaledGaussian1D{s}}};
            DistributionSpec syn = ProductOf{{IsotropicGaussian{{6.0}, 1.0}, ScaledGaussian1D{s}}};
            v.points.push_back(point(real, syn, n, n));
        }
        c.variants.push_back(std::move(v));
    }
    {
        auto& c = add("gaussian_mean_difference_pareto", "Gaussian mean difference with a Pareto column", true);
        auto v = make_variant("d1", "Gaussian Mean Difference + Pareto", "mu", GridScale::linear,
                              linear_grid(-6.0, 6.0, g));
        for (double mu : v.grid) {
            DistributionSpec real = ProductOf{{IsotropicGaussian{{0.0}, 1.0}, Pareto{1.01, 1.0}}};
            DistributionSpec syn = ProductOf{{IsotropicGaussian{{mu}, 1.0}, Pareto{1.01, 1.0}}};
            v.points.push_back(point(real, syn, n, n));
        }
        c.variants.push_back(std::move(v));
    }
    {
        auto& c = add("one_disjoint_dimension", "One disjoint dimension with many identical dimensions", false);
        auto v = make_variant("d_log", "One Disjoint Dim. + Many Identical Dim.", "d", GridScale::log,
                              rounded_log_grid(0.0, 3.0, g));
        for (double dv : v.grid) {
            auto const d = static_cast<std::size_t>(dv);
            auto mean = filled(d + 1, 0.0);
            mean[0] = 6.0;
            v.points.push_back(point(IsotropicGaussian{filled(d + 1, 0.0), 1.0}, IsotropicGaussian{mean, 1.0}, n, n));
        }
        c.variants.push_back(std::move(v));
    }
    {
        auto& c = add("discrete_continuous", "Discrete numerical vs. continuous numerical", true);
        for (bool discrete_real : {true, false}) {
            auto v = make_variant(discrete_real ? "discrete_real" : "continuous_real",
                                  "Discrete Num. vs. Continuous Num.", "s", GridScale::log, log_grid(0.0, 3.0, g));
            for (double s : v.grid) {
                DistributionSpec const disc = RoundedScaledGaussian1D{s};
                DistributionSpec const cont = ScaledGaussian1D{s};
                v.points.push_back(point(discrete_real ? disc : cont, discrete_real ? cont : disc, n, n));
            }
            c.variants.push_back(std::move(v));
        }
    }
    for (auto const& c : catalog) validate(c);
    return catalog;
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// One sweep cell's inputs: which point of which variant, which repeat.
struct CellKey
{
    std::size_t variant = 0;
    std::size_t grid = 0;
    std::size_t repeat = 0;

    friend auto operator<=>(CellKey const&, CellKey const&) = default;
};

inline StreamPath cell_path(CheckSpec const& spec, CellKey const& key, Role role)
{
    return StreamPath::cell(spec.id, spec.variants[key.variant].id, key.grid, key.repeat, role);
}

/// Samples both sets of one cell, standardizes them with statistics fitted on
/// the real set, and evaluates every configured metric. Failures are reported
/// per metric, never thrown.
inline std::vector<MetricScore> evaluate_cell(CheckSpec const& spec, CellKey const& key, MetricConfig cfg,
                                              std::uint64_t seed)
{
    auto const& p = spec.variants.at(key.variant).points.at(key.grid);
    try {
        auto const real = sample(p.real, p.real_size, RandomSource(seed, cell_path(spec, key, Role::real)), Role::real);
        auto const syn = sample(p.synthetic, p.synthetic_size,
                                RandomSource(seed, cell_path(spec, key, Role::synthetic)), Role::synthetic);
        auto const [er, eg] = embed_pair(Dataset::numerical(real), Dataset::numerical(syn));
        cfg.one_class_seed = RandomSource(seed, cell_path(spec, key, Role::real).child("one_class")).key();
        return compute_all(er, eg, cfg);
    } catch (std::exception const& e) {
        std::vector<MetricScore> out;
        for (MetricId m : all_metrics)
            if (cfg.enabled(m)) out.push_back({m, metric_kind(m), std::numeric_limits<double>::quiet_NaN(), e.what()});
        return out;
    }
}

struct Curve
{
    std::string check;
    std::string variant;
    MetricId metric = MetricId::iprec;
    std::string parameter;
    std::vector<double> x;
    /// values[r][i]: repeat r at grid index i.
    std::vector<std::vector<double>> values;
    std::vector<double> mean;
    /// Per grid index, the first error seen there; empty when fine.
    std::vector<std::string> errors;

    bool point_ok(std::size_t i) const { return errors[i].empty() && std::isfinite(mean[i]); }
    bool errored() const
    {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!point_ok(i)) return true;
        return false;
    }

    friend bool operator==(Curve const&, Curve const&) = default;
};

/// Recomputes `mean` from `values`; a point with any failed repeat has a NaN
/// mean and keeps an error.
inline void finalize_curve(Curve& c)
{
    std::size_t const n = c.x.size();
    c.mean.assign(n, 0.0);
    c.errors.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        bool ok = c.errors[i].empty();
        for (auto const& row : c.values) {
            if (!std::isfinite(row[i])) ok = false;
            s += row[i];
        }
        if (ok) {
            c.mean[i] = s / static_cast<double>(c.values.size());
        } else {
            c.mean[i] = std::numeric_limits<double>::quiet_NaN();
            if (c.errors[i].empty()) c.errors[i] = "non-finite value in a repeat";
        }
    }
}

/// Empty curves (NaN-filled) for every variant x enabled metric, in variant
/// then metric catalog order.
inline std::vector<Curve> empty_curves(CheckSpec const& spec, MetricConfig const& cfg, std::size_t repeats)
{
    std::vector<Curve> out;
    for (auto const& v : spec.variants) {
        for (MetricId m : all_metrics) {
            if (!cfg.enabled(m)) continue;
            Curve c;
            c.check = spec.id;
            c.variant = v.id;
            c.metric = m;
            c.parameter = v.parameter;
            c.x = v.grid;
            c.values.assign(repeats, std::vector<double>(v.grid.size(), std::numeric_limits<double>::quiet_NaN()));
            c.errors.assign(v.grid.size(), {});
            out.push_back(std::move(c));
        }
    }
    return out;
}

/// Stores one cell's scores into the curves produced by empty_curves.
inline void store_cell(std::vector<Curve>& curves, CheckSpec const& spec, MetricConfig const& cfg, CellKey const& key,
                       std::vector<MetricScore> const& scores)
{
    std::size_t const per_variant = static_cast<std::size_t>(
        std::count_if(all_metrics.begin(), all_metrics.end(), [&](MetricId m) { return cfg.enabled(m); }));
    for (std::size_t s = 0; s < scores.size(); ++s) {
        Curve& c = curves[key.variant * per_variant + s];
        if (c.metric != scores[s].id) throw Error("score order does not match curve layout");
        c.values[key.repeat][key.grid] = scores[s].value;
        if (!scores[s].ok() && c.errors[key.grid].empty())
            c.errors[key.grid] = "repeat " + std::to_string(key.repeat) + ": " + scores[s].error;
    }
    (void)spec;
}

/// Every (variant, metric) curve of one check, evaluated sequentially.
inline std::vector<Curve> run_check(CheckSpec const& spec, MetricConfig const& cfg, std::uint64_t seed)
{
    validate(spec);
    cfg.validate();
    auto curves = empty_curves(spec, cfg, spec.repeats);
    for (std::size_t v = 0; v < spec.variants.size(); ++v)
        for (std::size_t g = 0; g < spec.variants[v].grid.size(); ++g)
            for (std::size_t r = 0; r < spec.repeats; ++r) {
                CellKey const key{v, g, r};
                store_cell(curves, spec, cfg, key, evaluate_cell(spec, key, cfg, seed));
            }
    for (auto& c : curves) finalize_curve(c);
    return curves;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, GridPoint const& p)
{
    j = nlohmann::json{{"real", p.real}, {"synthetic", p.synthetic}, {"real_size", p.real_size},
                       {"synthetic_size", p.synthetic_size}};
}

inline void from_json(nlohmann::json const& j, GridPoint& p)
{
    j.at("real").get_to(p.real);
    j.at("synthetic").get_to(p.synthetic);
    j.at("real_size").get_to(p.real_size);
    j.at("synthetic_size").get_to(p.synthetic_size);
}

inline void to_json(nlohmann::json& j, CheckVariant const& v)
{
    j = nlohmann::json{{"id", v.id},       {"row", v.row},   {"parameter", v.parameter},
                       {"scale", v.scale}, {"grid", v.grid}, {"points", v.points}};
}

inline void from_json(nlohmann::json const& j, CheckVariant& v)
{
    j.at("id").get_to(v.id);
    j.at("row").get_to(v.row);
    j.at("parameter").get_to(v.parameter);
    j.at("scale").get_to(v.scale);
    j.at("grid").get_to(v.grid);
    j.at("points").get_to(v.points);
}

inline void to_json(nlohmann::json& j, CheckSpec const& c)
{
    j = nlohmann::json{{"id", c.id},           {"title", c.title},       {"tabular_only", c.tabular_only},
                       {"repeats", c.repeats}, {"variants", c.variants}};
}

inline void from_json(nlohmann::json const& j, CheckSpec& c)
{
    j.at("id").get_to(c.id);
    c.title = j.value("title", c.id);
    c.tabular_only = j.value("tabular_only", false);
    c.repeats = j.value("repeats", std::size_t{10});
    j.at("variants").get_to(c.variants);
}

} // namespace fds
