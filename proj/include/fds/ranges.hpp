#pragma once

#include <fds/checks.hpp>
#include <fds/random.hpp>
#include <fds/samplers.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace fds {

/// Squared Hellinger distance between N(mu1, s1^2) and N(mu2, s2^2).
inline double gaussian_hellinger_sq_1d(double mu1, double s1, double mu2, double s2)
{
    detail::require(s1 > 0.0 && s2 > 0.0, "sigmas must be positive");
    double const v = s1 * s1 + s2 * s2;
    double const dm = mu1 - mu2;
    return 1.0 - std::sqrt(2.0 * s1 * s2 / v) * std::exp(-dm * dm / (4.0 * v));
}

struct TvBracket
{
    double mu1 = 0.0, sigma1 = 1.0, mu2 = 0.0, sigma2 = 1.0;
    TvBounds bounds;
    double tv = 0.0;
    bool ok = false;
};

/// Random 1-D Gaussian pairs; each checks lower - tol <= numeric TV <= upper + tol.
inline std::vector<TvBracket> tv_bracket_trials(std::size_t trials, std::uint64_t seed, double tol = 1e-4)
{
    auto eng = RandomSource(seed, StreamPath{}.child("tv_bracket")).engine();
    std::uniform_real_distribution<double> mu(-6.0, 6.0);
    std::uniform_real_distribution<double> log_sigma(-1.5, 1.5);
    std::vector<TvBracket> out;
    for (std::size_t t = 0; t < trials; ++t) {
        TvBracket b;
        b.mu1 = mu(eng);
        b.sigma1 = std::pow(10.0, log_sigma(eng));
        b.mu2 = mu(eng);
        b.sigma2 = std::pow(10.0, log_sigma(eng));
        b.bounds = tv_bounds_from_hellinger(gaussian_hellinger_sq_1d(b.mu1, b.sigma1, b.mu2, b.sigma2));
        b.tv = gaussian_tv_1d_numeric(b.mu1, b.sigma1, b.mu2, b.sigma2);
        b.ok = b.tv >= b.bounds.lower - tol && b.tv <= b.bounds.upper + tol;
        out.push_back(b);
    }
    return out;
}

struct ExtremeBounds
{
    std::string check;
    std::string variant;
    double parameter = 0.0;
    TvBounds bounds;
    /// Lower bound at least `separation`.
    bool separated = false;
};

/// Hellinger-derived TV bounds at both ends of every Gaussian sweep. An
/// injected outlier or an identical extra column leaves the bounds of the
/// underlying Gaussian pair unchanged, up to one point's mass.
inline std::vector<ExtremeBounds> sweep_extreme_bounds(std::vector<CheckSpec> const& catalog, double separation = 0.95)
{
    std::vector<ExtremeBounds> out;
    for (auto const& check : catalog) {
        bool const shift = check.id == "gaussian_mean_difference" || check.id == "gaussian_mean_difference_outlier" ||
                           check.id == "gaussian_mean_difference_pareto";
        bool const ratio = check.id == "gaussian_std_difference";
        if (!shift && !ratio) continue;
        for (auto const& v : check.variants) {
            std::size_t const d = check.id == "gaussian_mean_difference_pareto" ? 1 : dimension(v.points.front().real);
            for (double p : {v.grid.front(), v.grid.back()}) {
                ExtremeBounds e{check.id, v.id, p, shift ? gaussian_tv_bounds_mean_shift(p, d)
                                                         : gaussian_tv_bounds_std_ratio(p, d), false};
                e.separated = e.bounds.lower >= separation;
                out.push_back(e);
            }
        }
    }
    return out;
}

inline void to_json(nlohmann::json& j, TvBounds const& b)
{
    j = nlohmann::json{{"hellinger_sq", b.hellinger_sq}, {"lower", b.lower}, {"upper", b.upper}};
}

inline void to_json(nlohmann::json& j, TvBracket const& b)
{
    j = nlohmann::json{{"mu1", b.mu1}, {"sigma1", b.sigma1}, {"mu2", b.mu2},
                       {"sigma2", b.sigma2}, {"bounds", b.bounds}, {"tv", b.tv}, {"ok", b.ok}};
}

inline void to_json(nlohmann::json& j, ExtremeBounds const& e)
{
    j = nlohmann::json{{"check", e.check},   {"variant", e.variant},     {"parameter", e.parameter},
                       {"bounds", e.bounds}, {"separated", e.separated}};
}

} // namespace fds
