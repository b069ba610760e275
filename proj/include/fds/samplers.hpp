#pragma once

#include <fds/dataset.hpp>
#include <fds/error.hpp>
#include <fds/random.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <numbers>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// Distribution specifications
// ---------------------------------------------------------------------------

struct DistributionSpec;

struct IsotropicGaussian
{
    std::vector<double> mean;
    double sigma = 1.0;

    friend bool operator==(IsotropicGaussian const&, IsotropicGaussian const&) = default;
};

struct GaussianMixture
{
    std::vector<std::vector<double>> means;
    std::vector<double> sigmas;
    std::vector<double> weights;

    friend bool operator==(GaussianMixture const&, GaussianMixture const&) = default;
};

/// Uniform on the sphere of the given radius in R^dim.
struct HypersphereSurface
{
    std::size_t dim = 2;
    double radius = 1.0;

    friend bool operator==(HypersphereSurface const&, HypersphereSurface const&) = default;
};

/// Uniform on [offset, offset + 1]^dim.
struct HypercubeUniform
{
    std::size_t dim = 1;
    double offset = 0.0;

    friend bool operator==(HypercubeUniform const&, HypercubeUniform const&) = default;
};

/// Uniform in the solid ball (cube rejection), or on its surface when
/// `surface` is set.
struct BallUniform
{
    std::size_t dim = 3;
    double radius = 0.8;
    bool surface = false;

    friend bool operator==(BallUniform const&, BallUniform const&) = default;
};

/// Circle of a torus around the z axis: angles uniform, not area-uniform.
struct TorusCircle
{
    double major = 1.0;
    double minor = 0.1;

    friend bool operator==(TorusCircle const&, TorusCircle const&) = default;
};

/// Type I Pareto: density shape / x^(shape + 1) on x >= scale.
struct Pareto
{
    double shape = 1.01;
    double scale = 1.0;

    friend bool operator==(Pareto const&, Pareto const&) = default;
};

/// s * z with z standard normal.
struct ScaledGaussian1D
{
    double scale = 1.0;

    friend bool operator==(ScaledGaussian1D const&, ScaledGaussian1D const&) = default;
};

/// round(s * z); consumes the stream exactly like ScaledGaussian1D.
struct RoundedScaledGaussian1D
{
    double scale = 1.0;

    friend bool operator==(RoundedScaledGaussian1D const&, RoundedScaledGaussian1D const&) = default;
};

/// Independent blocks of coordinates, sampled one block after another.
struct ProductOf
{
    std::vector<DistributionSpec> parts;

    friend bool operator==(ProductOf const&, ProductOf const&);
};

/// n draws from `base` followed by `point` as row n + 1.
struct WithOutlier
{
    std::shared_ptr<DistributionSpec const> base;
    std::vector<double> point;

    friend bool operator==(WithOutlier const&, WithOutlier const&);
};

struct DistributionSpec
{
    using variant_type = std::variant<IsotropicGaussian, GaussianMixture, HypersphereSurface, HypercubeUniform,
                                      BallUniform, TorusCircle, Pareto, ScaledGaussian1D, RoundedScaledGaussian1D,
                                      ProductOf, WithOutlier>;
    variant_type value;

    DistributionSpec() = default;
    template <class T>
        requires std::is_constructible_v<variant_type, T&&> && (!std::is_same_v<std::decay_t<T>, DistributionSpec>)
    DistributionSpec(T&& v) : value(std::forward<T>(v))
    {
    }

    friend bool operator==(DistributionSpec const&, DistributionSpec const&) = default;
};

inline bool operator==(ProductOf const& a, ProductOf const& b) { return a.parts == b.parts; }

inline bool operator==(WithOutlier const& a, WithOutlier const& b)
{
    bool const same_base = a.base == b.base || (a.base && b.base && *a.base == *b.base);
    return same_base && a.point == b.point;
}

inline DistributionSpec with_outlier(DistributionSpec base, std::vector<double> point)
{
    return WithOutlier{std::make_shared<DistributionSpec const>(std::move(base)), std::move(point)};
}

/// Number of coordinates a spec produces.
inline std::size_t dimension(DistributionSpec const& spec)
{
    struct V
    {
        std::size_t operator()(IsotropicGaussian const& s) const { return s.mean.size(); }
        std::size_t operator()(GaussianMixture const& s) const { return s.means.empty() ? 0 : s.means.front().size(); }
        std::size_t operator()(HypersphereSurface const& s) const { return s.dim; }
        std::size_t operator()(HypercubeUniform const& s) const { return s.dim; }
        std::size_t operator()(BallUniform const& s) const { return s.dim; }
        std::size_t operator()(TorusCircle const&) const { return 3; }
        std::size_t operator()(Pareto const&) const { return 1; }
        std::size_t operator()(ScaledGaussian1D const&) const { return 1; }
        std::size_t operator()(RoundedScaledGaussian1D const&) const { return 1; }
        std::size_t operator()(ProductOf const& s) const
        {
            std::size_t d = 0;
            for (auto const& p : s.parts) d += dimension(p);
            return d;
        }
        std::size_t operator()(WithOutlier const& s) const { return s.base ? dimension(*s.base) : 0; }
    };
    return std::visit(V{}, spec.value);
}

namespace detail {

inline void require_positive(double v, std::string const& what)
{
    require(std::isfinite(v) && v > 0.0, what + " must be positive and finite");
}

} // namespace detail

/// Throws PreconditionError describing the first invalid parameter.
inline void validate(DistributionSpec const& spec)
{
    struct V
    {
        void operator()(IsotropicGaussian const& s) const
        {
            detail::require(!s.mean.empty(), "Gaussian mean must not be empty");
            detail::require_positive(s.sigma, "Gaussian sigma");
        }
        void operator()(GaussianMixture const& s) const
        {
            detail::require(!s.means.empty(), "mixture needs at least one component");
            detail::require(s.sigmas.size() == s.means.size() && s.weights.size() == s.means.size(),
                            "mixture means, sigmas and weights must have equal length");
            double total = 0.0;
            for (std::size_t c = 0; c < s.means.size(); ++c) {
                detail::require(!s.means[c].empty() && s.means[c].size() == s.means.front().size(),
                                "mixture component means must share one dimension");
                detail::require_positive(s.sigmas[c], "mixture sigma");
                detail::require(s.weights[c] >= 0.0 && std::isfinite(s.weights[c]), "mixture weights must be >= 0");
                total += s.weights[c];
            }
            detail::require(std::abs(total - 1.0) <= 1e-9, "mixture weights must sum to 1");
        }
        void operator()(HypersphereSurface const& s) const
        {
            detail::require(s.dim >= 1, "hypersphere dimension must be positive");
            detail::require_positive(s.radius, "hypersphere radius");
        }
        void operator()(HypercubeUniform const& s) const
        {
            detail::require(s.dim >= 1, "hypercube dimension must be positive");
            detail::require(std::isfinite(s.offset), "hypercube offset must be finite");
        }
        void operator()(BallUniform const& s) const
        {
            detail::require(s.dim >= 1, "ball dimension must be positive");
            detail::require_positive(s.radius, "ball radius");
        }
        void operator()(TorusCircle const& s) const
        {
            detail::require_positive(s.minor, "torus minor radius");
            detail::require(s.minor < s.major, "torus minor radius must be below the major radius");
        }
        void operator()(Pareto const& s) const
        {
            detail::require_positive(s.shape, "Pareto shape");
            detail::require_positive(s.scale, "Pareto scale");
        }
        void operator()(ScaledGaussian1D const& s) const { detail::require_positive(s.scale, "Gaussian scale"); }
        void operator()(RoundedScaledGaussian1D const& s) const { detail::require_positive(s.scale, "Gaussian scale"); }
        void operator()(ProductOf const& s) const
        {
            detail::require(!s.parts.empty(), "product needs at least one part");
            for (auto const& p : s.parts) validate(p);
        }
        void operator()(WithOutlier const& s) const
        {
            detail::require(s.base != nullptr, "outlier spec needs a base distribution");
            validate(*s.base);
            detail::require(s.point.size() == dimension(*s.base), "outlier point dimension does not match its base");
            for (double v : s.point) detail::require(std::isfinite(v), "outlier point must be finite");
        }
    };
    std::visit(V{}, spec.value);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace detail {

using Engine = RandomSource::engine_type;

/// Row-major n x dimension(spec) draws. Every sampler consumes the engine in
/// a fixed order so replays are bit-identical.
inline std::vector<double> draw(DistributionSpec const& spec, std::size_t n, Engine& eng);

struct Drawer
{
    std::size_t n;
    Engine& eng;

    std::vector<double> operator()(IsotropicGaussian const& s) const
    {
        std::size_t const d = s.mean.size();
        std::normal_distribution<double> z;
        std::vector<double> out(n * d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) out[i * d + k] = s.mean[k] + s.sigma * z(eng);
        return out;
    }

    std::vector<double> operator()(GaussianMixture const& s) const
    {
        std::size_t const d = s.means.front().size();
        std::vector<double> cumulative(s.weights.size());
        std::partial_sum(s.weights.begin(), s.weights.end(), cumulative.begin());
        std::uniform_real_distribution<double> u;
        std::normal_distribution<double> z;
        std::vector<double> out(n * d);
        for (std::size_t i = 0; i < n; ++i) {
            double const t = u(eng) * cumulative.back();
            auto c = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), t) -
                                              cumulative.begin());
            c = std::min(c, cumulative.size() - 1);
            for (std::size_t k = 0; k < d; ++k) out[i * d + k] = s.means[c][k] + s.sigmas[c] * z(eng);
        }
        return out;
    }

    std::vector<double> operator()(HypersphereSurface const& s) const
    {
        std::normal_distribution<double> z;
        std::vector<double> out(n * s.dim);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = out.data() + i * s.dim;
            double norm = 0.0;
            do {
                norm = 0.0;
                for (std::size_t k = 0; k < s.dim; ++k) {
                    row[k] = z(eng);
                    norm += row[k] * row[k];
                }
            } while (norm == 0.0);
            double const f = s.radius / std::sqrt(norm);
            for (std::size_t k = 0; k < s.dim; ++k) row[k] *= f;
        }
        return out;
    }

    std::vector<double> operator()(HypercubeUniform const& s) const
    {
        std::uniform_real_distribution<double> u;
        std::vector<double> out(n * s.dim);
        for (double& v : out) v = s.offset + u(eng);
        return out;
    }

    std::vector<double> operator()(BallUniform const& s) const
    {
        if (s.surface) return (*this)(HypersphereSurface{s.dim, s.radius});
        std::uniform_real_distribution<double> u(-s.radius, s.radius);
        std::vector<double> out(n * s.dim);
        std::size_t const budget = 1000 * n + 1000;
        std::size_t attempts = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double* row = out.data() + i * s.dim;
            while (true) {
                if (++attempts > budget)
                    throw NumericalError("ball rejection sampling exhausted its budget of " + std::to_string(budget) +
                                         " proposals after accepting " + std::to_string(i) + " of " +
                                         std::to_string(n) + " points (dimension " + std::to_string(s.dim) + ")");
                double norm = 0.0;
                for (std::size_t k = 0; k < s.dim; ++k) {
                    row[k] = u(eng);
                    norm += row[k] * row[k];
                }
                if (norm <= s.radius * s.radius) break;
            }
        }
        return out;
    }

    std::vector<double> operator()(TorusCircle const& s) const
    {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::vector<double> out(n * 3);
        for (std::size_t i = 0; i < n; ++i) {
            double const theta = angle(eng);
            double const psi = angle(eng);
            double const rho = s.major + s.minor * std::cos(psi);
            out[i * 3 + 0] = rho * std::cos(theta);
            out[i * 3 + 1] = rho * std::sin(theta);
            out[i * 3 + 2] = s.minor * std::sin(psi);
        }
        return out;
    }

    std::vector<double> operator()(Pareto const& s) const
    {
        std::uniform_real_distribution<double> u;
        std::vector<double> out(n);
        for (double& v : out) v = s.scale * std::pow(1.0 - u(eng), -1.0 / s.shape);
        return out;
    }

    std::vector<double> operator()(ScaledGaussian1D const& s) const
    {
        std::normal_distribution<double> z;
        std::vector<double> out(n);
        for (double& v : out) v = s.scale * z(eng);
        return out;
    }

    std::vector<double> operator()(RoundedScaledGaussian1D const& s) const
    {
        auto out = (*this)(ScaledGaussian1D{s.scale});
        for (double& v : out) v = std::round(v);
        return out;
    }

    std::vector<double> operator()(ProductOf const& s) const
    {
        std::size_t const d = dimension(DistributionSpec(s));
        std::vector<double> out(n * d);
        std::size_t offset = 0;
        for (auto const& part : s.parts) {
            std::size_t const pd = dimension(part);
            auto const block = draw(part, n, eng);
            for (std::size_t i = 0; i < n; ++i)
                std::copy_n(block.data() + i * pd, pd, out.data() + i * d + offset);
            offset += pd;
        }
        return out;
    }

    std::vector<double> operator()(WithOutlier const& s) const
    {
        auto out = draw(*s.base, n, eng);
        out.insert(out.end(), s.point.begin(), s.point.end());
        return out;
    }
};

inline std::vector<double> draw(DistributionSpec const& spec, std::size_t n, Engine& eng)
{
    return std::visit(Drawer{n, eng}, spec.value);
}

} // namespace detail

/// Number of rows `sample(spec, n, ...)` produces.
inline std::size_t sample_rows(DistributionSpec const& spec, std::size_t n)
{
    return std::holds_alternative<WithOutlier>(spec.value) ? n + 1 : n;
}

inline EmbeddedSet sample(DistributionSpec const& spec, std::size_t n, RandomSource const& rng, Role tag = Role::real)
{
    detail::require(n >= 1, "sample size must be at least 1");
    validate(spec);
    auto eng = rng.engine();
    auto values = detail::draw(spec, n, eng);
    std::size_t const d = dimension(spec);
    std::size_t const rows = values.size() / d;
    return EmbeddedSet(rows, d, std::move(values), tag);
}

inline EmbeddedSet inject_outlier(EmbeddedSet const& points, std::span<double const> point)
{
    detail::require(point.size() == points.dim(), "outlier dimension does not match the point set");
    std::vector<double> values = points.values();
    values.insert(values.end(), point.begin(), point.end());
    return EmbeddedSet(points.size() + 1, points.dim(), std::move(values), points.tag());
}

// ---------------------------------------------------------------------------
// Geometry helpers and total-variation bounds
// ---------------------------------------------------------------------------

/// Per-axis shift t so that two unit cubes offset by t on every axis overlap
/// in volume `target_volume`: (1 - t)^d = target_volume.
inline double hypercube_offset_for_overlap(std::size_t d, double target_volume = 0.2)
{
    detail::require(d >= 1, "hypercube dimension must be positive");
    detail::require(target_volume > 0.0 && target_volume < 1.0, "target overlap volume must lie in (0, 1)");
    return 1.0 - std::pow(target_volume, 1.0 / static_cast<double>(d));
}

struct TvBounds
{
    double hellinger_sq = 0.0;
    double lower = 0.0; // H^2
    double upper = 0.0; // H sqrt(2 - H^2)
};

inline TvBounds tv_bounds_from_hellinger(double h2)
{
    h2 = std::clamp(h2, 0.0, 1.0);
    return {h2, h2, std::sqrt(h2) * std::sqrt(2.0 - h2)};
}

/// N(0, I_d) against N(mu 1_d, I_d).
inline TvBounds gaussian_tv_bounds_mean_shift(double mu, std::size_t d)
{
    detail::require(d >= 1, "dimension must be positive");
    return tv_bounds_from_hellinger(-std::expm1(-static_cast<double>(d) * mu * mu / 8.0));
}

/// N(0, I_d) against N(0, sigma^2 I_d).
inline TvBounds gaussian_tv_bounds_std_ratio(double sigma, std::size_t d)
{
    detail::require(d >= 1, "dimension must be positive");
    detail::require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
    double const bc = std::pow(2.0 * sigma / (1.0 + sigma * sigma), static_cast<double>(d) / 2.0);
    return tv_bounds_from_hellinger(1.0 - bc);
}

/// Total variation between two 1-D Gaussians by adaptive Gauss-Kronrod
/// quadrature of |p - q| / 2, split where the densities cross.
inline double gaussian_tv_1d_numeric(double mu1, double sigma1, double mu2, double sigma2)
{
    detail::require(sigma1 > 0.0 && sigma2 > 0.0, "sigmas must be positive");
    auto pdf = [](double x, double m, double s) {
        double const z = (x - m) / s;
        return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
    };
    auto f = [&](double x) { return 0.5 * std::abs(pdf(x, mu1, sigma1) - pdf(x, mu2, sigma2)); };

    double const lo = std::min(mu1 - 40.0 * sigma1, mu2 - 40.0 * sigma2);
    double const hi = std::max(mu1 + 40.0 * sigma1, mu2 + 40.0 * sigma2);
    std::vector<double> cuts{lo};
    // log p1 = log p2 is quadratic in x: a x^2 + b x + c = 0
    double const a = 0.5 / (sigma2 * sigma2) - 0.5 / (sigma1 * sigma1);
    double const b = mu1 / (sigma1 * sigma1) - mu2 / (sigma2 * sigma2);
    double const c = 0.5 * mu2 * mu2 / (sigma2 * sigma2) - 0.5 * mu1 * mu1 / (sigma1 * sigma1) +
                     std::log(sigma2 / sigma1);
    if (a == 0.0) {
        if (b != 0.0) cuts.push_back(-c / b);
    } else {
        double const disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            double const r = std::sqrt(disc);
            cuts.push_back((-b - r) / (2.0 * a));
            cuts.push_back((-b + r) / (2.0 * a));
        }
    }
    // keep both peaks as breakpoints so narrow components are resolved
    cuts.push_back(mu1);
    cuts.push_back(mu2);
    for (double m : {mu1, mu2})
        for (double s : {sigma1, sigma2})
            for (double k : {-8.0, -3.0, 3.0, 8.0}) cuts.push_back(m + k * s);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double x) { return x < lo || x > hi; }), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-12);
    return std::clamp(total, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, DistributionSpec const& spec);
inline void from_json(nlohmann::json const& j, DistributionSpec& spec);

namespace detail {

struct SpecWriter
{
    nlohmann::json& j;

    void operator()(IsotropicGaussian const& s) const
    {
        j = {{"type", "isotropic_gaussian"}, {"mean", s.mean}, {"sigma", s.sigma}};
    }
    void operator()(GaussianMixture const& s) const
    {
        j = {{"type", "gaussian_mixture"}, {"means", s.means}, {"sigmas", s.sigmas}, {"weights", s.weights}};
    }
    void operator()(HypersphereSurface const& s) const
    {
        j = {{"type", "hypersphere_surface"}, {"dim", s.dim}, {"radius", s.radius}};
    }
    void operator()(HypercubeUniform const& s) const
    {
        j = {{"type", "hypercube_uniform"}, {"dim", s.dim}, {"offset", s.offset}};
    }
    void operator()(BallUniform const& s) const
    {
        j = {{"type", "ball_uniform"}, {"dim", s.dim}, {"radius", s.radius}, {"surface", s.surface}};
    }
    void operator()(TorusCircle const& s) const
    {
        j = {{"type", "torus_circle"}, {"major", s.major}, {"minor", s.minor}};
    }
    void operator()(Pareto const& s) const { j = {{"type", "pareto"}, {"shape", s.shape}, {"scale", s.scale}}; }
    void operator()(ScaledGaussian1D const& s) const { j = {{"type", "scaled_gaussian_1d"}, {"scale", s.scale}}; }
    void operator()(RoundedScaledGaussian1D const& s) const
    {
        j = {{"type", "rounded_scaled_gaussian_1d"}, {"scale", s.scale}};
    }
    void operator()(ProductOf const& s) const { j = {{"type", "product"}, {"parts", s.parts}}; }
    void operator()(WithOutlier const& s) const
    {
        j = {{"type", "with_outlier"}, {"base", *s.base}, {"point", s.point}};
    }
};

} // namespace detail

inline void to_json(nlohmann::json& j, DistributionSpec const& spec)
{
    std::visit(detail::SpecWriter{j}, spec.value);
}

inline void from_json(nlohmann::json const& j, DistributionSpec& spec)
{
    auto const type = j.at("type").get<std::string>();
    if (type == "isotropic_gaussian")
        spec = IsotropicGaussian{j.at("mean").get<std::vector<double>>(), j.at("sigma").get<double>()};
    else if (type == "gaussian_mixture")
        spec = GaussianMixture{j.at("means").get<std::vector<std::vector<double>>>(),
                               j.at("sigmas").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>()};
    else if (type == "hypersphere_surface")
        spec = HypersphereSurface{j.at("dim").get<std::size_t>(), j.at("radius").get<double>()};
    else if (type == "hypercube_uniform")
        spec = HypercubeUniform{j.at("dim").get<std::size_t>(), j.at("offset").get<double>()};
    else if (type == "ball_uniform")
        spec = BallUniform{j.at("dim").get<std::size_t>(), j.at("radius").get<double>(), j.value("surface", false)};
    else if (type == "torus_circle")
        spec = TorusCircle{j.at("major").get<double>(), j.at("minor").get<double>()};
    else if (type == "pareto")
        spec = Pareto{j.at("shape").get<double>(), j.at("scale").get<double>()};
    else if (type == "scaled_gaussian_1d")
        spec = ScaledGaussian1D{j.at("scale").get<double>()};
    else if (type == "rounded_scaled_gaussian_1d")
        spec = RoundedScaledGaussian1D{j.at("scale").get<double>()};
    else if (type == "product")
        spec = ProductOf{j.at("parts").get<std::vector<DistributionSpec>>()};
    else if (type == "with_outlier")
        spec = with_outlier(j.at("base").get<DistributionSpec>(), j.at("point").get<std::vector<double>>());
    else
        throw PreconditionError("unknown distribution type '" + type + "'");
}

} // namespace fds
