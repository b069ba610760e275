#pragma once

// Naive reference implementations used as test oracles. Everything here is
// written directly from the metric definitions with plain loops and full
// sorts, sharing no code with the library kernels.

#include <fds/dataset.hpp>
#include <fds/random.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline Points rows(fds::EmbeddedSet const& s)
{
    Points p(s.size(), std::vector<double>(s.dim()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t k = 0; k < s.dim(); ++k) p[i][k] = s(i, k);
    return p;
}

inline double dist(std::vector<double> const& a, std::vector<double> const& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

/// k-th smallest distance from each point to the others (self excluded) or
/// to all points (self included), by full sort.
inline std::vector<double> knn_radii(Points const& p, std::size_t k, bool exclude_self = true)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < p.size(); ++j)
            if (!exclude_self || j != i) d.push_back(dist(p[i], p[j]));
        std::sort(d.begin(), d.end());
        out.push_back(d[k - 1]);
    }
    return out;
}

/// Per query, the number of closed balls (center_i, radius_i) containing it.
inline std::vector<std::size_t> count_in_balls(Points const& centers, std::vector<double> const& radii,
                                               Points const& queries)
{
    std::vector<std::size_t> out;
    for (auto const& q : queries) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < centers.size(); ++i) c += dist(q, centers[i]) <= radii[i];
        out.push_back(c);
    }
    return out;
}

inline std::pair<std::size_t, double> nearest(std::vector<double> const& q, Points const& p)
{
    std::size_t best = 0;
    for (std::size_t j = 1; j < p.size(); ++j)
        if (dist(q, p[j]) < dist(q, p[best])) best = j;
    return {best, dist(q, p[best])};
}

inline double frac(std::size_t hits, std::size_t n) { return static_cast<double>(hits) / static_cast<double>(n); }

/// Fraction of queries inside at least one ball of `centers` with k-NN radii.
inline double in_support(Points const& centers, Points const& queries, std::size_t k)
{
    auto const r = knn_radii(centers, k);
    auto const c = count_in_balls(centers, r, queries);
    return frac(static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](std::size_t v) { return v > 0; })),
                queries.size());
}

inline double density(Points const& real, Points const& syn, std::size_t k)
{
    auto const c = count_in_balls(real, knn_radii(real, k), syn);
    double total = 0.0;
    for (auto v : c) total += static_cast<double>(v);
    return total / (static_cast<double>(k) * static_cast<double>(syn.size()));
}

inline double coverage(Points const& real, Points const& syn, std::size_t k)
{
    auto const r = knn_radii(real, k);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < real.size(); ++i) {
        bool any = false;
        for (auto const& g : syn) any = any || dist(real[i], g) <= r[i];
        hits += any;
    }
    return frac(hits, real.size());
}

/// Fraction of `own` points whose own-set k-NN ball contains at least one
/// point of `other`.
inline double ball_hits_other(Points const& own, Points const& other, std::size_t k)
{
    return coverage(own, other, k);
}

/// Fraction of `own` points whose own-set k'-NN ball holds at least k points of `other`.
inline double cover(Points const& own, Points const& other, std::size_t k_prime, std::size_t k)
{
    auto const r = knn_radii(own, k_prime);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < own.size(); ++i) {
        std::size_t c = 0;
        for (auto const& o : other) c += dist(own[i], o) <= r[i];
        hits += c >= k;
    }
    return frac(hits, own.size());
}

/// Mean probabilistic score of `queries` under the PSR of `centers`.
inline double psr_mean(Points const& centers, Points const& queries, double a, std::size_t k)
{
    auto const r = knn_radii(centers, k);
    double const R = a * std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(centers.size());
    double s = 0.0;
    for (auto const& q : queries) {
        double prod = 1.0;
        for (auto const& c : centers) {
            double const d = dist(q, c);
            double const f = d <= R ? 1.0 - d / R : 0.0;
            prod *= 1.0 - f;
        }
        s += 1.0 - prod;
    }
    return s / static_cast<double>(queries.size());
}

inline std::vector<double> median(Points const& p)
{
    std::vector<double> m(p.front().size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        std::vector<double> col;
        for (auto const& x : p) col.push_back(x[k]);
        std::sort(col.begin(), col.end());
        std::size_t const n = col.size();
        m[k] = n % 2 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
    }
    return m;
}

/// ceil(q n)-th smallest value.
inline double lower_quantile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()) - 1e-9));
    r = std::clamp<std::size_t>(r, 1, v.size());
    return v[r - 1];
}

inline std::vector<double> grid(std::size_t n)
{
    std::vector<double> g;
    for (std::size_t j = 1; j <= n; ++j) g.push_back(static_cast<double>(j) / static_cast<double>(n));
    return g;
}

/// 1 - 2 * trapezoid integral of |v - t| over (0, 0), (g_1, v_1), ...
inline double integrate(std::vector<double> const& g, std::vector<double> const& v)
{
    double area = 0.0, t0 = 0.0, f0 = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        double const f1 = std::abs(v[j] - g[j]);
        area += (g[j] - t0) * (f0 + f1) / 2.0;
        t0 = g[j];
        f0 = f1;
    }
    return 1.0 - 2.0 * area;
}

inline double iap(Points const& real, Points const& syn, std::size_t n_grid)
{
    auto const c = median(real);
    std::vector<double> dr, dg;
    for (auto const& x : real) dr.push_back(dist(x, c));
    for (auto const& x : syn) dg.push_back(dist(x, c));
    auto const g = grid(n_grid);
    std::vector<double> p;
    for (double a : g) {
        double const radius = lower_quantile(dr, a);
        p.push_back(frac(static_cast<std::size_t>(std::count_if(dg.begin(), dg.end(), [&](double d) { return d <= radius; })),
                         syn.size()));
    }
    return integrate(g, p);
}

/// Matched rule: nearest synthetic point overall, inside the real k-NN ball
/// and within the b-quantile of matched distances to the synthetic median.
inline double ibr_matched(Points const& real, Points const& syn, std::size_t n_grid, std::size_t k)
{
    auto const c = median(syn);
    auto const r = knn_radii(real, k);
    std::vector<char> hit;
    std::vector<double> spread;
    for (std::size_t i = 0; i < real.size(); ++i) {
        auto const [j, d] = nearest(real[i], syn);
        hit.push_back(d <= r[i]);
        spread.push_back(dist(syn[j], c));
    }
    auto const g = grid(n_grid);
    std::vector<double> v;
    for (double b : g) {
        double const radius = lower_quantile(spread, b);
        std::size_t h = 0;
        for (std::size_t i = 0; i < real.size(); ++i) h += hit[i] && spread[i] <= radius;
        v.push_back(frac(h, real.size()));
    }
    return integrate(g, v);
}

/// Restricted rule: nearest synthetic point among those in the synthetic b-ball.
inline double ibr_restricted(Points const& real, Points const& syn, std::size_t n_grid, std::size_t k)
{
    auto const c = median(syn);
    auto const r = knn_radii(real, k);
    std::vector<double> ds;
    for (auto const& x : syn) ds.push_back(dist(x, c));
    auto const g = grid(n_grid);
    std::vector<double> v;
    for (double b : g) {
        double const radius = lower_quantile(ds, b);
        std::size_t h = 0;
        for (std::size_t i = 0; i < real.size(); ++i) {
            double best = INFINITY;
            for (std::size_t j = 0; j < syn.size(); ++j)
                if (ds[j] <= radius) best = std::min(best, dist(real[i], syn[j]));
            h += best <= r[i];
        }
        v.push_back(frac(h, real.size()));
    }
    return integrate(g, v);
}

struct Instance
{
    fds::EmbeddedSet points;
    fds::EmbeddedSet queries;
    std::size_t k = 1;
};

/// Random oracle instance: sizes up to `max_n`, dimension up to `max_d`,
/// k up to 10. Every fourth instance lives on a small integer lattice so that
/// duplicates and exact ties occur.
inline Instance random_instance(std::mt19937_64& eng, std::size_t max_n = 300, std::size_t max_d = 64)
{
    std::uniform_int_distribution<std::size_t> n_dist(12, max_n), d_dist(1, max_d), k_dist(1, 10), kind(0, 3);
    std::size_t const n = n_dist(eng), m = n_dist(eng), d = d_dist(eng);
    bool const lattice = kind(eng) == 0;
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> cell(-2, 2);
    auto fill = [&](std::size_t rows) {
        std::vector<double> v(rows * d);
        for (double& x : v) x = lattice ? cell(eng) : normal(eng) * 3.0;
        return fds::EmbeddedSet(rows, d, std::move(v));
    };
    Instance inst{fill(n), fill(m), k_dist(eng)};
    return inst;
}

/// Monte-Carlo estimate of identical-distribution coverage on standard
/// Gaussians of dimension `dim`.
inline double mc_expected_coverage(std::size_t nr, std::size_t ng, std::size_t k, std::size_t trials,
                                   std::uint64_t seed, std::size_t dim = 8)
{
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    double total = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Points real(nr, std::vector<double>(dim)), syn(ng, std::vector<double>(dim));
        for (auto& x : real)
            for (auto& v : x) v = normal(eng);
        for (auto& x : syn)
            for (auto& v : x) v = normal(eng);
        total += coverage(real, syn, k);
    }
    return total / static_cast<double>(trials);
}

} // namespace oracle
