#pragma once

#include <fds/dataset.hpp>
#include <fds/error.hpp>
#include <fds/neighbors.hpp>
#include <fds/one_class.hpp>
#include <fds/random.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

enum class MetricId : std::uint8_t
{
    iprec,
    irec,
    density,
    coverage,
    iap,
    ibr,
    cprec,
    crec,
    symprec,
    symrec,
    pprec,
    prec_p,
};

enum class MetricKind : std::uint8_t
{
    fidelity,
    diversity,
};

inline constexpr std::array<MetricId, 12> all_metrics{
    MetricId::iprec, MetricId::irec,    MetricId::density, MetricId::coverage, MetricId::iap,   MetricId::ibr,
    MetricId::cprec, MetricId::crec,    MetricId::symprec, MetricId::symrec,   MetricId::pprec, MetricId::prec_p,
};

inline constexpr std::array<MetricId, 6> fidelity_metrics{MetricId::iprec, MetricId::density, MetricId::iap,
                                                          MetricId::cprec, MetricId::symprec, MetricId::pprec};
inline constexpr std::array<MetricId, 6> diversity_metrics{MetricId::irec, MetricId::coverage, MetricId::ibr,
                                                           MetricId::crec, MetricId::symrec,   MetricId::prec_p};

/// Stable identifier used on the command line and in files.
constexpr std::string_view metric_id(MetricId m) noexcept
{
    constexpr std::array<std::string_view, 12> ids{"iprec", "irec",  "density", "coverage", "iap",   "ibr",
                                                   "cprec", "crec",  "symprec", "symrec",   "pprec", "prec_p"};
    return ids[static_cast<std::size_t>(m)];
}

/// Display name used in tables.
constexpr std::string_view metric_label(MetricId m) noexcept
{
    constexpr std::array<std::string_view, 12> labels{"I-Prec", "I-Rec",  "Density", "Coverage", "IAP",    "IBR",
                                                      "C-Prec", "C-Rec",  "symPrec", "symRec",   "P-Prec", "P-Rec"};
    return labels[static_cast<std::size_t>(m)];
}

constexpr MetricKind metric_kind(MetricId m) noexcept
{
    return static_cast<std::size_t>(m) % 2 == 0 ? MetricKind::fidelity : MetricKind::diversity;
}

/// The other member of a fidelity/diversity pair.
constexpr MetricId metric_partner(MetricId m) noexcept
{
    return static_cast<MetricId>(static_cast<std::size_t>(m) ^ 1u);
}

inline std::optional<MetricId> parse_metric_id(std::string_view text) noexcept
{
    for (MetricId m : all_metrics)
        if (metric_id(m) == text) return m;
    return std::nullopt;
}

constexpr std::string_view to_string(MetricKind k) noexcept { return k == MetricKind::fidelity ? "fidelity" : "diversity"; }

// ---------------------------------------------------------------------------
// Scores and configuration
// ---------------------------------------------------------------------------

struct MetricScore
{
    MetricId id = MetricId::iprec;
    MetricKind kind = MetricKind::fidelity;
    double value = std::numeric_limits<double>::quiet_NaN();
    /// Empty on success.
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

/// Range check applied to every score. Sets `error` and returns false when the
/// value is outside the metric's admissible range.
inline bool validate_score(MetricScore& s)
{
    if (!s.ok()) return false;
    double const v = s.value;
    char const* problem = nullptr;
    if (!std::isfinite(v)) {
        problem = "is not finite";
    } else if (s.id == MetricId::density) {
        if (v < 0.0) problem = "is negative";
    } else if (s.id == MetricId::iap || s.id == MetricId::ibr) {
        // trapezoidal error may push these slightly below 0
        if (v > 1.0 || v < -1.0) problem = "is outside [-1, 1]";
    } else if (v < 0.0 || v > 1.0) {
        problem = "is outside [0, 1]";
    }
    if (!problem) return true;
    s.error = std::string(metric_id(s.id)) + " value " + format_double(v) + " " + problem;
    s.value = std::numeric_limits<double>::quiet_NaN();
    return false;
}

enum class CoverRule : std::uint8_t
{
    at_least, // count >= k
    at_most,  // count <= k
};

enum class AlphaEmbedding : std::uint8_t
{
    simple,
    one_class,
};

/// How a real point is matched to a synthetic point in beta-recall.
enum class BetaRule : std::uint8_t
{
    /// Nearest synthetic point overall; it counts for b when it lies in the
    /// real point's k-NN ball and in the b-quantile of all matched points'
    /// distances to the synthetic center (reference implementation).
    matched,
    /// Nearest synthetic point among those inside the synthetic b-ball.
    restricted,
};

struct MetricConfig
{
    std::size_t ipr_k = 3;
    /// Unset: calibrated from the set sizes.
    std::optional<std::size_t> coverage_k;
    std::size_t coverage_k_max = 20;
    double coverage_target = 0.95;
    std::size_t sym_k = 5;
    double ppr_a = 1.2;
    std::size_t ppr_k = 4;
    /// Unset: k' = ceil(ln|real| + 6), k = ceil(k'/3).
    std::optional<std::size_t> cover_k_prime;
    std::optional<std::size_t> cover_k;
    CoverRule cover_rule = CoverRule::at_least;
    std::size_t alpha_grid = 50;
    std::size_t beta_k = 5;
    BetaRule beta_rule = BetaRule::matched;
    AlphaEmbedding embedding = AlphaEmbedding::simple;
    OneClassConfig one_class;
    /// Seed for the one-class network initialisation.
    std::uint64_t one_class_seed = 0;
    /// Metrics to evaluate; output keeps catalog order regardless of this order.
    std::vector<MetricId> metrics{all_metrics.begin(), all_metrics.end()};

    bool enabled(MetricId m) const noexcept { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); }

    void validate() const
    {
        detail::require(ipr_k >= 1 && sym_k >= 1 && ppr_k >= 1 && beta_k >= 1, "all k must be at least 1");
        detail::require(!coverage_k || *coverage_k >= 1, "coverage k must be at least 1");
        detail::require(coverage_k_max >= 1, "coverage k cap must be at least 1");
        detail::require(coverage_target > 0.0 && coverage_target < 1.0, "coverage target must lie in (0, 1)");
        detail::require(!cover_k_prime || *cover_k_prime >= 1, "cover k' must be at least 1");
        detail::require(!cover_k || *cover_k >= 1, "cover k must be at least 1");
        detail::require(ppr_a > 0.0 && std::isfinite(ppr_a), "P-Prec scale a must be positive");
        detail::require(alpha_grid >= 10, "alpha/beta grid needs at least 10 points");
    }
};

// ---------------------------------------------------------------------------
// Improved precision / recall
// ---------------------------------------------------------------------------

struct PrecisionRecall
{
    double precision = 0.0;
    double recall = 0.0;
};

namespace detail {

inline double fraction(std::size_t count, std::size_t n) noexcept
{
    return static_cast<double>(count) / static_cast<double>(n);
}

template <class Pred> double fraction_if(std::size_t n, Pred&& pred)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (pred(i)) ++c;
    return fraction(c, n);
}

inline void require_larger(EmbeddedSet const& set, std::size_t k, std::string_view what)
{
    require(set.size() > k, std::string(what) + " needs more than " + std::to_string(k) + " " +
                                std::string(to_string(set.tag())) + " points, got " + std::to_string(set.size()));
}

} // namespace detail

inline PrecisionRecall improved_pr(EmbeddedSet const& real, EmbeddedSet const& synthetic, std::size_t k = 3)
{
    detail::require_larger(real, k, "improved precision/recall");
    detail::require_larger(synthetic, k, "improved precision/recall");
    auto const in_real = count_in_balls(real, knn_radii(real, k), synthetic);
    auto const in_syn = count_in_balls(synthetic, knn_radii(synthetic, k), real);
    return {detail::fraction_if(synthetic.size(), [&](std::size_t j) { return in_real.query_inside(j); }),
            detail::fraction_if(real.size(), [&](std::size_t i) { return in_syn.query_inside(i); })};
}

// ---------------------------------------------------------------------------
// Density / coverage
// ---------------------------------------------------------------------------

struct DensityCoverage
{
    double density = 0.0;
    double coverage = 0.0;
};

inline DensityCoverage density_coverage(EmbeddedSet const& real, EmbeddedSet const& synthetic, std::size_t k)
{
    detail::require_larger(real, k, "density/coverage");
    auto const counts = count_in_balls(real, knn_radii(real, k), synthetic);
    std::size_t total = 0;
    for (std::size_t c : counts.query_count) total += c;
    return {static_cast<double>(total) / (static_cast<double>(k) * static_cast<double>(synthetic.size())),
            detail::fraction_if(real.size(), [&](std::size_t i) { return counts.center_hit(i); })};
}

/// Expected coverage when both sets are i.i.d. from the same continuous
/// distribution. A real point is missed exactly when none of the synthetic
/// points rank among the k nearest of the other nr - 1 + ng points, and by
/// exchangeability every choice of those k is equally likely.
inline double expected_coverage(std::size_t nr, std::size_t ng, std::size_t k)
{
    detail::require(nr >= 1 && ng >= 1, "expected coverage needs non-empty sets");
    double miss = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (i + 1 > nr - 1) return 1.0; // ball reaches past every other real point
        miss *= static_cast<double>(nr - 1 - i) / static_cast<double>(nr - 1 + ng - i);
    }
    return 1.0 - miss;
}

/// Smallest k in [1, k_max] whose expected identical-distribution coverage
/// exceeds `target`; k_max when no k qualifies.
inline std::size_t calibrate_coverage_k(std::size_t nr, std::size_t ng, double target = 0.95, std::size_t k_max = 20)
{
    detail::require(nr >= 25 && ng >= 25, "coverage calibration needs at least 25 points per set");
    detail::require(k_max >= 1, "coverage k cap must be at least 1");
    for (std::size_t k = 1; k <= k_max; ++k)
        if (expected_coverage(nr, ng, k) > target) return k;
    return k_max;
}

// ---------------------------------------------------------------------------
// Alpha-precision / beta-recall
// ---------------------------------------------------------------------------

/// n evenly spaced points j/n, j = 1..n.
inline std::vector<double> unit_grid(std::size_t n)
{
    detail::require(n >= 1, "grid needs at least one point");
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = static_cast<double>(j + 1) / static_cast<double>(n);
    return g;
}

/// Per-coordinate median; the mean of the two middle values for even n.
inline std::vector<double> coordinatewise_median(EmbeddedSet const& points)
{
    std::size_t const n = points.size();
    std::vector<double> out(points.dim()), column(n);
    for (std::size_t k = 0; k < points.dim(); ++k) {
        for (std::size_t i = 0; i < n; ++i) column[i] = points(i, k);
        auto mid = column.begin() + static_cast<std::ptrdiff_t>(n / 2);
        std::nth_element(column.begin(), mid, column.end());
        double m = *mid;
        if (n % 2 == 0) m = 0.5 * (m + *std::max_element(column.begin(), mid));
        out[k] = m;
    }
    return out;
}

inline std::vector<double> distances_to(EmbeddedSet const& points, std::span<double const> center)
{
    detail::require(center.size() == points.dim(), "center dimension does not match the point set");
    std::vector<double> d(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        d[i] = std::sqrt(detail::squared_distance(points.data() + i * points.dim(), center.data(), center.size()));
    return d;
}

namespace detail {

inline void require_unit_grid(std::span<double const> grid)
{
    require(!grid.empty(), "grid must not be empty");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        require(grid[j] > 0.0 && grid[j] <= 1.0, "grid values must lie in (0, 1]");
        require(j == 0 || grid[j] > grid[j - 1], "grid must be strictly increasing");
    }
}

/// ceil(q * n) clamped to [1, n]; the tolerance absorbs representation error in q.
inline std::size_t quantile_rank(double q, std::size_t n)
{
    auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
    return std::clamp<std::size_t>(r, 1, n);
}

/// Radius of the ball around a center holding a q fraction of points
/// (lower order statistic). `sorted` holds ascending distances to the center.
inline double quantile_radius(std::vector<double> const& sorted, double q)
{
    return sorted[quantile_rank(q, sorted.size()) - 1];
}

} // namespace detail

/// P_a: fraction of synthetic points inside the real a-ball, for each a in
/// `grid`. The ball is centred at `center` (default: real median).
inline std::vector<double> alpha_precision_curve(EmbeddedSet const& real, EmbeddedSet const& synthetic,
                                                 std::span<double const> grid,
                                                 std::optional<std::vector<double>> const& center = std::nullopt)
{
    detail::require_unit_grid(grid);
    auto const c = center ? *center : coordinatewise_median(real);
    auto dr = distances_to(real, c);
    auto dg = distances_to(synthetic, c);
    std::sort(dr.begin(), dr.end());
    std::sort(dg.begin(), dg.end());
    std::vector<double> p(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double const radius = detail::quantile_radius(dr, grid[j]);
        auto const inside = static_cast<std::size_t>(std::upper_bound(dg.begin(), dg.end(), radius) - dg.begin());
        p[j] = detail::fraction(inside, synthetic.size());
    }
    return p;
}

/// 1 - 2 * integral of |v(t) - t| over [0, 1] by the trapezoid rule, with the
/// point (0, 0) prepended. The grid must end at 1.
inline double integrate_unit_deviation(std::span<double const> grid, std::span<double const> values)
{
    detail::require_unit_grid(grid);
    detail::require(values.size() == grid.size(), "one value per grid point is required");
    detail::require(grid.back() == 1.0, "grid must end at 1");
    double area = 0.0;
    double t0 = 0.0, f0 = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double const f1 = std::abs(values[j] - grid[j]);
        area += 0.5 * (grid[j] - t0) * (f0 + f1);
        t0 = grid[j];
        f0 = f1;
    }
    return 1.0 - 2.0 * area;
}

inline double integrated_alpha_precision(EmbeddedSet const& real, EmbeddedSet const& synthetic,
                                         std::size_t grid_size = 50,
                                         std::optional<std::vector<double>> const& center = std::nullopt)
{
    auto const grid = unit_grid(grid_size);
    return integrate_unit_deviation(grid, alpha_precision_curve(real, synthetic, grid, center));
}

namespace detail {

/// Synthetic indices ordered by distance to the synthetic center (ties by
/// index) and, per grid point, how many of them fall in the b-ball.
struct BetaBalls
{
    std::vector<std::size_t> order;
    std::vector<std::size_t> cuts;
};

inline BetaBalls beta_balls(EmbeddedSet const& synthetic, std::span<double const> grid,
                            std::optional<std::vector<double>> const& center)
{
    auto const c = center ? *center : coordinatewise_median(synthetic);
    auto const d = distances_to(synthetic, c);
    BetaBalls out;
    out.order.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out.order[i] = i;
    std::sort(out.order.begin(), out.order.end(),
              [&](std::size_t a, std::size_t b) { return d[a] < d[b] || (d[a] == d[b] && a < b); });
    std::vector<double> sorted(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) sorted[i] = d[out.order[i]];
    for (double b : grid) {
        double const radius = quantile_radius(sorted, b);
        out.cuts.push_back(static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), radius) -
                                                    sorted.begin()));
    }
    return out;
}

inline EmbeddedSet reorder(EmbeddedSet const& points, std::span<std::size_t const> order)
{
    std::vector<double> values(points.size() * points.dim());
    for (std::size_t i = 0; i < order.size(); ++i)
        std::copy_n(points.data() + order[i] * points.dim(), points.dim(), values.data() + i * points.dim());
    return EmbeddedSet(points.size(), points.dim(), std::move(values), points.tag());
}

} // namespace detail

namespace detail {

/// Matched-rule curve: `hit[i]` says real point i's match lies in its k-NN
/// ball, `spread[i]` is the match's distance to the synthetic center.
inline std::vector<double> matched_beta_recall(std::vector<char> const& hit, std::vector<double> const& spread,
                                               std::span<double const> grid)
{
    std::vector<double> sorted = spread;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> r(grid.size());
    for (std::size_t b = 0; b < grid.size(); ++b) {
        double const radius = quantile_radius(sorted, grid[b]);
        r[b] = fraction_if(hit.size(), [&](std::size_t i) { return hit[i] && spread[i] <= radius; });
    }
    return r;
}

} // namespace detail

/// R_b for each b in `grid`, matching every real point to a synthetic point
/// according to `rule` and testing the match against the real point's k-NN
/// ball. The synthetic b-balls are centred at `center` (default: synthetic
/// median). An empty b-ball gives R_b = 0.
inline std::vector<double> beta_recall_curve(EmbeddedSet const& real, EmbeddedSet const& synthetic,
                                             std::span<double const> grid, std::size_t k = 5,
                                             std::optional<std::vector<double>> const& center = std::nullopt,
                                             BetaRule rule = BetaRule::matched)
{
    detail::require_unit_grid(grid);
    detail::require_larger(real, k, "beta-recall");
    detail::require(synthetic.size() >= 1, "beta-recall needs synthetic points");
    auto const radii = knn_radii(real, k).radii;
    if (rule == BetaRule::matched) {
        auto const c = center ? *center : coordinatewise_median(synthetic);
        auto const nn = nearest_neighbors(real, synthetic);
        std::vector<char> hit(real.size());
        std::vector<double> spread(real.size());
        for (std::size_t i = 0; i < real.size(); ++i) {
            hit[i] = nn[i].distance <= radii[i];
            spread[i] = std::sqrt(detail::squared_distance(synthetic.data() + nn[i].index * synthetic.dim(), c.data(),
                                                           c.size()));
        }
        return detail::matched_beta_recall(hit, spread, grid);
    }
    auto const balls = detail::beta_balls(synthetic, grid, center);
    auto const ordered = detail::reorder(synthetic, balls.order);
    auto const nearest = nearest_within_prefixes(real, ordered, balls.cuts);
    std::size_t const nb = grid.size();
    std::vector<double> r(nb);
    for (std::size_t b = 0; b < nb; ++b)
        r[b] = detail::fraction_if(real.size(), [&](std::size_t i) { return nearest[i * nb + b] <= radii[i]; });
    return r;
}

inline double integrated_beta_recall(EmbeddedSet const& real, EmbeddedSet const& synthetic, std::size_t grid_size = 50,
                                     std::size_t k = 5,
                                     std::optional<std::vector<double>> const& center = std::nullopt,
                                     BetaRule rule = BetaRule::matched)
{
    auto const grid = unit_grid(grid_size);
    return integrate_unit_deviation(grid, beta_recall_curve(real, synthetic, grid, k, center, rule));
}

// ---------------------------------------------------------------------------
// Precision / recall cover
// ---------------------------------------------------------------------------

struct CoverParameters
{
    std::size_t k_prime = 0;
    std::size_t k = 0;
};

/// k' = ceil(ln n + 6), k = ceil(k'/3).
inline CoverParameters cover_parameters(std::size_t n_real)
{
    detail::require(n_real >= 1, "cover parameters need a non-empty real set");
    auto const kp = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(n_real)) + 6.0));
    return {kp, (kp + 2) / 3};
}

namespace detail {

inline bool cover_accepts(std::size_t count, std::size_t k, CoverRule rule) noexcept
{
    return rule == CoverRule::at_least ? count >= k : count <= k;
}

} // namespace detail

/// C-Prec: fraction of synthetic points whose k'-NN ball (radii from the
/// synthetic set) holds at least k real points. C-Rec swaps the roles.
inline PrecisionRecall pr_cover(EmbeddedSet const& real, EmbeddedSet const& synthetic, std::size_t k_prime,
                                std::size_t k, CoverRule rule = CoverRule::at_least)
{
    detail::require_larger(synthetic, k_prime, "precision cover");
    detail::require_larger(real, k_prime, "recall cover");
    auto const syn_balls = count_in_balls(synthetic, knn_radii(synthetic, k_prime), real);
    auto const real_balls = count_in_balls(real, knn_radii(real, k_prime), synthetic);
    return {detail::fraction_if(synthetic.size(),
                                [&](std::size_t j) { return detail::cover_accepts(syn_balls.center_count[j], k, rule); }),
            detail::fraction_if(real.size(),
                                [&](std::size_t i) { return detail::cover_accepts(real_balls.center_count[i], k, rule); })};
}

inline PrecisionRecall pr_cover(EmbeddedSet const& real, EmbeddedSet const& synthetic,
                                CoverRule rule = CoverRule::at_least)
{
    auto const p = cover_parameters(real.size());
    return pr_cover(real, synthetic, p.k_prime, p.k, rule);
}

// ---------------------------------------------------------------------------
// Symmetric precision / recall
// ---------------------------------------------------------------------------

struct SymmetricPR
{
    double precision = 0.0; // min(cPrecision, I-Prec)
    double recall = 0.0;    // min(cRecall, I-Rec)
    double c_precision = 0.0;
    double c_recall = 0.0;
    double i_precision = 0.0;
    double i_recall = 0.0;
};

inline SymmetricPR sym_pr(EmbeddedSet const& real, EmbeddedSet const& synthetic, std::size_t k = 5)
{
    detail::require_larger(real, k, "symmetric precision/recall");
    detail::require_larger(synthetic, k, "symmetric precision/recall");
    auto const in_real = count_in_balls(real, knn_radii(real, k), synthetic);
    auto const in_syn = count_in_balls(synthetic, knn_radii(synthetic, k), real);
    SymmetricPR s;
    s.i_precision = detail::fraction_if(synthetic.size(), [&](std::size_t j) { return in_real.query_inside(j); });
    s.i_recall = detail::fraction_if(real.size(), [&](std::size_t i) { return in_syn.query_inside(i); });
    s.c_precision = detail::fraction_if(synthetic.size(), [&](std::size_t j) { return in_syn.center_hit(j); });
    s.c_recall = detail::fraction_if(real.size(), [&](std::size_t i) { return in_real.center_hit(i); });
    s.precision = std::min(s.c_precision, s.i_precision);
    s.recall = std::min(s.c_recall, s.i_recall);
    return s;
}

// ---------------------------------------------------------------------------
// Probabilistic precision / recall
// ---------------------------------------------------------------------------

/// R = a / n * sum of k-NN distances within the set.
inline double psr_radius(EmbeddedSet const& points, double a, std::size_t k)
{
    auto const r = knn_radii(points, k).radii;
    double s = 0.0;
    for (double v : r) s += v;
    return a / static_cast<double>(points.size()) * s;
}

/// Mean over queries of 1 - prod_c (1 - f(c, q)), f = max(0, 1 - d/R). Factors
/// are multiplied in center index order.
inline double mean_psr(EmbeddedSet const& centers, EmbeddedSet const& queries, double radius)
{
    std::vector<double> prod(queries.size(), 1.0);
    for_each_distance_tile(queries, centers, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                 double const* tile) {
        std::size_t const cw = c1 - c0;
        for (std::size_t q = r0; q < r1; ++q) {
            double const* drow = tile + (q - r0) * cw;
            double p = prod[q];
            for (std::size_t c = 0; c < cw; ++c)
                if (drow[c] <= radius) p *= drow[c] / radius;
            prod[q] = p;
        }
    });
    double s = 0.0;
    for (double p : prod) s += 1.0 - p;
    return s / static_cast<double>(queries.size());
}

inline PrecisionRecall probabilistic_pr(EmbeddedSet const& real, EmbeddedSet const& synthetic, double a = 1.2,
                                        std::size_t k = 4)
{
    detail::require(a > 0.0, "P-Prec scale a must be positive");
    detail::require_larger(real, k, "probabilistic precision/recall");
    detail::require_larger(synthetic, k, "probabilistic precision/recall");
    return {mean_psr(real, synthetic, psr_radius(real, a, k)), mean_psr(synthetic, real, psr_radius(synthetic, a, k))};
}

// ---------------------------------------------------------------------------
// All metrics in one pass
// ---------------------------------------------------------------------------

namespace detail {

struct PairState
{
    bool wanted = false;
    std::string error;
    bool active() const noexcept { return wanted && error.empty(); }
};

template <class Fn> void guard(PairState& s, Fn&& fn)
{
    if (!s.active()) return;
    try {
        fn();
    } catch (std::exception const& e) {
        s.error = e.what();
    }
}

} // namespace detail

/// Every enabled metric, in catalog order. Neighbour tables are built once
/// per set and all cross-set quantities come from a single sweep over the
/// real x synthetic distance matrix; the values equal those of the
/// individual functions above. A metric whose preconditions fail carries an
/// error instead of a value.
inline std::vector<MetricScore> compute_all(EmbeddedSet const& real, EmbeddedSet const& synthetic,
                                            MetricConfig const& cfg = {})
{
    cfg.validate();
    detail::require(real.dim() == synthetic.dim(), "real and synthetic sets have different dimensions (" +
                                                       std::to_string(real.dim()) + " vs " +
                                                       std::to_string(synthetic.dim()) + ")");
    std::size_t const nr = real.size();
    std::size_t const ng = synthetic.size();

    enum Pair { ipr, dc, ab, cover, sym, ppr, pair_count };
    std::array<detail::PairState, pair_count> st;
    auto pair_of = [](MetricId m) { return static_cast<Pair>(static_cast<std::size_t>(m) / 2); };
    for (MetricId m : cfg.metrics) st[pair_of(m)].wanted = true;
    bool const want_iap = cfg.enabled(MetricId::iap);
    bool const want_ibr = cfg.enabled(MetricId::ibr);

    auto fail = [](detail::PairState& s, std::string msg) {
        if (s.error.empty()) s.error = std::move(msg);
    };
    auto needs = [&](detail::PairState& s, std::size_t k, char const* what, bool both) {
        if (!s.wanted) return;
        try {
            detail::require_larger(real, k, what);
            if (both) detail::require_larger(synthetic, k, what);
        } catch (std::exception const& e) {
            fail(s, e.what());
        }
    };

    std::size_t kc = 0;
    if (st[dc].wanted) {
        try {
            kc = cfg.coverage_k ? *cfg.coverage_k
                                : calibrate_coverage_k(nr, ng, cfg.coverage_target, cfg.coverage_k_max);
        } catch (std::exception const& e) {
            fail(st[dc], e.what());
        }
    }
    auto const cp_default = cover_parameters(nr);
    std::size_t const kp = cfg.cover_k_prime.value_or(cp_default.k_prime);
    std::size_t const kcov = cfg.cover_k.value_or(cfg.cover_k_prime ? (kp + 2) / 3 : cp_default.k);

    needs(st[ipr], cfg.ipr_k, "improved precision/recall", true);
    needs(st[dc], kc, "density/coverage", false);
    needs(st[cover], kp, "precision/recall cover", true);
    needs(st[sym], cfg.sym_k, "symmetric precision/recall", true);
    needs(st[ppr], cfg.ppr_k, "probabilistic precision/recall", true);
    if (want_ibr && cfg.embedding == AlphaEmbedding::simple) needs(st[ab], cfg.beta_k, "beta-recall", false);
    bool const fused_ibr = want_ibr && st[ab].active() && cfg.embedding == AlphaEmbedding::simple;

    // self neighbour tables
    std::size_t kr = 0, kg = 0;
    auto want_r = [&](Pair p, std::size_t k) {
        if (st[p].active()) kr = std::max(kr, k);
    };
    auto want_g = [&](Pair p, std::size_t k) {
        if (st[p].active()) kg = std::max(kg, k);
    };
    want_r(ipr, cfg.ipr_k);
    want_g(ipr, cfg.ipr_k);
    want_r(dc, kc);
    want_r(sym, cfg.sym_k);
    want_g(sym, cfg.sym_k);
    want_r(cover, kp);
    want_g(cover, kp);
    want_r(ppr, cfg.ppr_k);
    want_g(ppr, cfg.ppr_k);
    if (fused_ibr) kr = std::max(kr, cfg.beta_k);

    KnnTable const tr = kr ? knn_table(real, kr, true) : KnnTable{};
    KnnTable const tg = kg ? knn_table(synthetic, kg, true) : KnnTable{};
    auto col = [](KnnTable const& t, bool on, std::size_t k) { return on ? t.radii(k) : std::vector<double>{}; };

    bool const on_ipr = st[ipr].active(), on_dc = st[dc].active(), on_sym = st[sym].active();
    bool const on_cover = st[cover].active(), on_ppr = st[ppr].active();

    auto const rr_i = col(tr, on_ipr, cfg.ipr_k), rg_i = col(tg, on_ipr, cfg.ipr_k);
    auto const rr_c = col(tr, on_dc, kc);
    auto const rr_s = col(tr, on_sym, cfg.sym_k), rg_s = col(tg, on_sym, cfg.sym_k);
    auto const rr_p = col(tr, on_cover, kp), rg_p = col(tg, on_cover, kp);
    auto const rr_b = col(tr, fused_ibr, cfg.beta_k);

    double psr_r = 0.0, psr_g = 0.0;
    if (on_ppr) {
        auto sum = [](std::vector<double> const& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s;
        };
        psr_r = cfg.ppr_a / static_cast<double>(nr) * sum(tr.radii(cfg.ppr_k));
        psr_g = cfg.ppr_a / static_cast<double>(ng) * sum(tg.radii(cfg.ppr_k));
    }

    // beta-ball buckets: synthetic point j joins the ball at grid index bucket[j]
    std::vector<double> grid;
    std::vector<std::size_t> bucket;
    std::size_t nb = 0;
    if (fused_ibr || (want_iap && st[ab].wanted)) grid = unit_grid(cfg.alpha_grid);
    bool const matched = cfg.beta_rule == BetaRule::matched;
    if (fused_ibr && !matched) {
        nb = grid.size();
        auto const balls = detail::beta_balls(synthetic, grid, std::nullopt);
        bucket.resize(ng);
        for (std::size_t pos = 0; pos < ng; ++pos)
            bucket[balls.order[pos]] =
                static_cast<std::size_t>(std::upper_bound(balls.cuts.begin(), balls.cuts.end(), pos) - balls.cuts.begin());
    }

    std::vector<char> syn_in_i(on_ipr ? ng : 0), real_in_i(on_ipr ? nr : 0);
    std::vector<char> real_cov(on_dc ? nr : 0);
    std::size_t density_total = 0;
    std::vector<char> syn_in_s(on_sym ? ng : 0), real_in_s(on_sym ? nr : 0);
    std::vector<char> syn_hit_s(on_sym ? ng : 0), real_hit_s(on_sym ? nr : 0);
    std::vector<std::size_t> syn_cover(on_cover ? ng : 0), real_cover(on_cover ? nr : 0);
    std::vector<double> prod_g(on_ppr ? ng : 0, 1.0), prod_r(on_ppr ? nr : 0, 1.0);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(fused_ibr ? nr * nb : 0, inf);
    std::vector<Neighbor> nn(fused_ibr && matched ? nr : 0, Neighbor{0, inf});

    if (on_ipr || on_dc || on_sym || on_cover || on_ppr || fused_ibr) {
        for_each_distance_tile(real, synthetic, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                    double const* tile) {
            std::size_t const cw = c1 - c0;
            for (std::size_t i = r0; i < r1; ++i) {
                double const* drow = tile + (i - r0) * cw;
                for (std::size_t j = c0; j < c1; ++j) {
                    double const d = drow[j - c0];
                    if (on_ipr) {
                        if (d <= rr_i[i]) syn_in_i[j] = 1;
                        if (d <= rg_i[j]) real_in_i[i] = 1;
                    }
                    if (on_dc && d <= rr_c[i]) {
                        ++density_total;
                        real_cov[i] = 1;
                    }
                    if (on_sym) {
                        if (d <= rr_s[i]) syn_in_s[j] = real_hit_s[i] = 1;
                        if (d <= rg_s[j]) real_in_s[i] = syn_hit_s[j] = 1;
                    }
                    if (on_cover) {
                        if (d <= rg_p[j]) ++syn_cover[j];
                        if (d <= rr_p[i]) ++real_cover[i];
                    }
                    if (on_ppr) {
                        if (d <= psr_r) prod_g[j] *= d / psr_r;
                        if (d <= psr_g) prod_r[i] *= d / psr_g;
                    }
                    if (fused_ibr) {
                        if (matched) {
                            if (d < nn[i].distance) nn[i] = {j, d};
                        } else {
                            std::size_t const b = bucket[j];
                            if (b < nb && d < best[i * nb + b]) best[i * nb + b] = d;
                        }
                    }
                }
            }
        });
    }

    std::array<MetricScore, 12> scores;
    for (MetricId m : all_metrics) scores[static_cast<std::size_t>(m)] = {m, metric_kind(m), 0.0, {}};
    auto set = [&](MetricId m, double v) { scores[static_cast<std::size_t>(m)].value = v; };
    auto flag_frac = [](std::vector<char> const& v) {
        return detail::fraction(static_cast<std::size_t>(std::count(v.begin(), v.end(), char{1})), v.size());
    };

    if (on_ipr) {
        set(MetricId::iprec, flag_frac(syn_in_i));
        set(MetricId::irec, flag_frac(real_in_i));
    }
    if (on_dc) {
        set(MetricId::density,
            static_cast<double>(density_total) / (static_cast<double>(kc) * static_cast<double>(ng)));
        set(MetricId::coverage, flag_frac(real_cov));
    }
    if (on_sym) {
        set(MetricId::symprec, std::min(flag_frac(syn_hit_s), flag_frac(syn_in_s)));
        set(MetricId::symrec, std::min(flag_frac(real_hit_s), flag_frac(real_in_s)));
    }
    if (on_cover) {
        set(MetricId::cprec, detail::fraction_if(ng, [&](std::size_t j) {
                return detail::cover_accepts(syn_cover[j], kcov, cfg.cover_rule);
            }));
        set(MetricId::crec, detail::fraction_if(nr, [&](std::size_t i) {
                return detail::cover_accepts(real_cover[i], kcov, cfg.cover_rule);
            }));
    }
    if (on_ppr) {
        auto mean_complement = [](std::vector<double> const& prod) {
            double s = 0.0;
            for (double p : prod) s += 1.0 - p;
            return s / static_cast<double>(prod.size());
        };
        set(MetricId::pprec, mean_complement(prod_g));
        set(MetricId::prec_p, mean_complement(prod_r));
    }

    // alpha-precision / beta-recall
    std::string iap_error, ibr_error;
    if (st[ab].wanted) {
        if (cfg.embedding == AlphaEmbedding::simple) {
            if (want_iap) {
                try {
                    set(MetricId::iap,
                        integrate_unit_deviation(grid, alpha_precision_curve(real, synthetic, grid)));
                } catch (std::exception const& e) {
                    iap_error = e.what();
                }
            }
            if (want_ibr) {
                if (!st[ab].error.empty()) {
                    ibr_error = st[ab].error;
                } else if (matched) {
                    auto const c = coordinatewise_median(synthetic);
                    std::vector<char> hit(nr);
                    std::vector<double> spread(nr);
                    for (std::size_t i = 0; i < nr; ++i) {
                        hit[i] = nn[i].distance <= rr_b[i];
                        spread[i] = std::sqrt(detail::squared_distance(
                            synthetic.data() + nn[i].index * synthetic.dim(), c.data(), c.size()));
                    }
                    set(MetricId::ibr, integrate_unit_deviation(grid, detail::matched_beta_recall(hit, spread, grid)));
                } else {
                    std::vector<double> r(nb);
                    for (std::size_t i = 0; i < nr; ++i)
                        for (std::size_t b = 1; b < nb; ++b)
                            best[i * nb + b] = std::min(best[i * nb + b], best[i * nb + b - 1]);
                    for (std::size_t b = 0; b < nb; ++b)
                        r[b] = detail::fraction_if(nr, [&](std::size_t i) { return best[i * nb + b] <= rr_b[i]; });
                    set(MetricId::ibr, integrate_unit_deviation(grid, r));
                }
            }
        } else {
            try {
                auto const net = train_one_class_embedding(real, cfg.one_class,
                                                           RandomSource(cfg.one_class_seed, StreamPath{}.child("one_class")));
                auto const er = apply_one_class(net, real);
                auto const eg = apply_one_class(net, synthetic);
                if (want_iap) {
                    try {
                        set(MetricId::iap, integrated_alpha_precision(er, eg, cfg.alpha_grid, net.center));
                    } catch (std::exception const& e) {
                        iap_error = e.what();
                    }
                }
                if (want_ibr) {
                    try {
                        set(MetricId::ibr, integrated_beta_recall(er, eg, cfg.alpha_grid, cfg.beta_k, std::nullopt,
                                                                  cfg.beta_rule));
                    } catch (std::exception const& e) {
                        ibr_error = e.what();
                    }
                }
            } catch (std::exception const& e) {
                iap_error = ibr_error = e.what();
            }
        }
    }

    std::vector<MetricScore> out;
    for (MetricId m : all_metrics) {
        if (!cfg.enabled(m)) continue;
        MetricScore s = scores[static_cast<std::size_t>(m)];
        Pair const p = pair_of(m);
        if (p == ab)
            s.error = m == MetricId::iap ? iap_error : ibr_error;
        else
            s.error = st[p].error;
        if (!s.ok())
            s.value = std::numeric_limits<double>::quiet_NaN();
        else
            validate_score(s);
        out.push_back(std::move(s));
    }
    return out;
}

/// Throws one Error listing every failed metric.
inline void throw_if_failed(std::vector<MetricScore> const& scores)
{
    std::string msg;
    for (auto const& s : scores)
        if (!s.ok()) msg += (msg.empty() ? "" : "; ") + std::string(metric_id(s.id)) + ": " + s.error;
    if (!msg.empty()) throw Error(msg);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, MetricId m) { j = std::string(metric_id(m)); }

inline void from_json(nlohmann::json const& j, MetricId& m)
{
    auto const text = j.get<std::string>();
    auto const parsed = parse_metric_id(text);
    if (!parsed) throw PreconditionError("unknown metric id '" + text + "'");
    m = *parsed;
}

NLOHMANN_JSON_SERIALIZE_ENUM(CoverRule, {{CoverRule::at_least, "at_least"}, {CoverRule::at_most, "at_most"}})
NLOHMANN_JSON_SERIALIZE_ENUM(BetaRule, {{BetaRule::matched, "matched"}, {BetaRule::restricted, "restricted"}})
NLOHMANN_JSON_SERIALIZE_ENUM(AlphaEmbedding, {{AlphaEmbedding::simple, "simple"}, {AlphaEmbedding::one_class, "one-class"}})

inline void to_json(nlohmann::json& j, MetricConfig const& c)
{
    j = nlohmann::json{{"ipr_k", c.ipr_k},
                       {"coverage_k", c.coverage_k ? nlohmann::json(*c.coverage_k) : nlohmann::json(nullptr)},
                       {"coverage_k_max", c.coverage_k_max},
                       {"coverage_target", c.coverage_target},
                       {"sym_k", c.sym_k},
                       {"ppr_a", c.ppr_a},
                       {"ppr_k", c.ppr_k},
                       {"cover_k_prime", c.cover_k_prime ? nlohmann::json(*c.cover_k_prime) : nlohmann::json(nullptr)},
                       {"cover_k", c.cover_k ? nlohmann::json(*c.cover_k) : nlohmann::json(nullptr)},
                       {"cover_rule", c.cover_rule},
                       {"alpha_grid", c.alpha_grid},
                       {"beta_k", c.beta_k},
                       {"beta_rule", c.beta_rule},
                       {"embedding", c.embedding},
                       {"one_class", c.one_class},
                       {"one_class_seed", c.one_class_seed},
                       {"metrics", c.metrics}};
}

inline void from_json(nlohmann::json const& j, MetricConfig& c)
{
    MetricConfig const d;
    auto opt = [&](char const* key) -> std::optional<std::size_t> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<std::size_t>();
    };
    c.ipr_k = j.value("ipr_k", d.ipr_k);
    c.coverage_k = opt("coverage_k");
    c.coverage_k_max = j.value("coverage_k_max", d.coverage_k_max);
    c.coverage_target = j.value("coverage_target", d.coverage_target);
    c.sym_k = j.value("sym_k", d.sym_k);
    c.ppr_a = j.value("ppr_a", d.ppr_a);
    c.ppr_k = j.value("ppr_k", d.ppr_k);
    c.cover_k_prime = opt("cover_k_prime");
    c.cover_k = opt("cover_k");
    c.cover_rule = j.value("cover_rule", d.cover_rule);
    c.alpha_grid = j.value("alpha_grid", d.alpha_grid);
    c.beta_k = j.value("beta_k", d.beta_k);
    c.beta_rule = j.value("beta_rule", d.beta_rule);
    c.embedding = j.value("embedding", d.embedding);
    c.one_class = j.value("one_class", d.one_class);
    c.one_class_seed = j.value("one_class_seed", d.one_class_seed);
    c.metrics = j.value("metrics", d.metrics);
}

} // namespace fds
