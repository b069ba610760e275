#pragma once

#include <fds/dataset.hpp>
#include <fds/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// Distance tiles
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::size_t tile_rows = 32;

// Keep the transposed column block around 128 KiB.
inline std::size_t tile_cols(std::size_t dim) noexcept
{
    std::size_t cols = 16384 / std::max<std::size_t>(dim, 1);
    cols = std::clamp<std::size_t>(cols, 16, 512);
    return cols - cols % 8;
}

inline double squared_distance(double const* a, double const* b, std::size_t dim) noexcept
{
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double const t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

} // namespace detail

/// Exact Euclidean distances between every row of `rows` and every row of
/// `cols`, delivered tile by tile:
///
///     fn(row_begin, row_end, col_begin, col_end, tile)
///
/// where `tile` is row-major with stride `col_end - col_begin`. Each pair is
/// summed over coordinates in index order, so a distance is bit-identical to a
/// naive loop and symmetric in its arguments.
template <class Fn> void for_each_distance_tile(EmbeddedSet const& rows, EmbeddedSet const& cols, Fn&& fn)
{
    detail::require(rows.dim() == cols.dim(), "point sets have different dimensions (" + std::to_string(rows.dim()) +
                                                  " vs " + std::to_string(cols.dim()) + ")");
    std::size_t const dim = rows.dim();
    std::size_t const cb = detail::tile_cols(dim);
    std::vector<double> transposed(dim * cb);
    std::vector<double> tile(detail::tile_rows * cb);

    for (std::size_t c0 = 0; c0 < cols.size(); c0 += cb) {
        std::size_t const c1 = std::min(cols.size(), c0 + cb);
        std::size_t const cw = c1 - c0;
        for (std::size_t j = 0; j < cw; ++j) {
            double const* src = cols.data() + (c0 + j) * dim;
            for (std::size_t k = 0; k < dim; ++k) transposed[k * cb + j] = src[k];
        }
        for (std::size_t r0 = 0; r0 < rows.size(); r0 += detail::tile_rows) {
            std::size_t const r1 = std::min(rows.size(), r0 + detail::tile_rows);
            for (std::size_t i = r0; i < r1; ++i) {
                double* __restrict acc = tile.data() + (i - r0) * cw;
                double const* a = rows.data() + i * dim;
                std::fill(acc, acc + cw, 0.0);
                for (std::size_t k = 0; k < dim; ++k) {
                    double const ak = a[k];
                    double const* __restrict bt = transposed.data() + k * cb;
                    for (std::size_t j = 0; j < cw; ++j) {
                        double const t = ak - bt[j];
                        acc[j] += t * t;
                    }
                }
                for (std::size_t j = 0; j < cw; ++j) acc[j] = std::sqrt(acc[j]);
            }
            fn(r0, r1, c0, c1, static_cast<double const*>(tile.data()));
        }
    }
}

// ---------------------------------------------------------------------------
// k-nearest-neighbour distances
// ---------------------------------------------------------------------------

/// The `k` smallest distances from every point of a set to the rest of it,
/// sorted ascending per point.
class KnnTable
{
public:
    KnnTable() = default;
    KnnTable(std::size_t n, std::size_t k, bool exclude_self, std::vector<double> dist)
        : n_(n), k_(k), exclude_self_(exclude_self), dist_(std::move(dist))
    {
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    bool exclude_self() const noexcept { return exclude_self_; }

    /// Distance from point i to its j-th nearest neighbour, j in [1, k].
    double at(std::size_t i, std::size_t j) const noexcept { return dist_[i * k_ + (j - 1)]; }

    /// Column of j-th neighbour distances, j in [1, k].
    std::vector<double> radii(std::size_t j) const
    {
        detail::require(j >= 1 && j <= k_, "requested neighbour rank " + std::to_string(j) + " outside [1, " +
                                               std::to_string(k_) + "]");
        std::vector<double> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = at(i, j);
        return out;
    }

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    bool exclude_self_ = true;
    std::vector<double> dist_;
};

inline KnnTable knn_table(EmbeddedSet const& points, std::size_t k, bool exclude_self)
{
    std::size_t const n = points.size();
    std::size_t const limit = exclude_self ? n - 1 : n;
    detail::require(k >= 1 && k <= limit, "k = " + std::to_string(k) + " is out of range for a set of " +
                                              std::to_string(n) + " points" + (exclude_self ? " (self excluded)" : ""));
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(n * k, inf);
    for_each_distance_tile(points, points, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                               double const* tile) {
        std::size_t const cw = c1 - c0;
        for (std::size_t i = r0; i < r1; ++i) {
            double* buf = best.data() + i * k;
            double const* drow = tile + (i - r0) * cw;
            for (std::size_t j = c0; j < c1; ++j) {
                double const d = drow[j - c0];
                if (!(d < buf[k - 1])) continue;
                if (exclude_self && j == i) continue;
                std::size_t pos = k - 1;
                while (pos > 0 && buf[pos - 1] > d) {
                    buf[pos] = buf[pos - 1];
                    --pos;
                }
                buf[pos] = d;
            }
        }
    });
    return KnnTable(n, k, exclude_self, std::move(best));
}

/// Per-point radius r_i = NND_k(phi_i, Phi).
struct NeighborRadii
{
    std::vector<double> radii;
    std::size_t k = 0;
    bool exclude_self = true;
};

inline NeighborRadii knn_radii(EmbeddedSet const& points, std::size_t k, bool exclude_self = true)
{
    return {knn_table(points, k, exclude_self).radii(k), k, exclude_self};
}

// ---------------------------------------------------------------------------
// Closed-ball membership
// ---------------------------------------------------------------------------

struct BallCounts
{
    /// Number of balls containing each query.
    std::vector<std::size_t> query_count;
    /// Number of queries inside each ball.
    std::vector<std::size_t> center_count;

    bool query_inside(std::size_t q) const noexcept { return query_count[q] > 0; }
    bool center_hit(std::size_t c) const noexcept { return center_count[c] > 0; }
};

/// Membership of queries in the closed balls B(c_i, r_i), i.e. ||q - c_i|| <= r_i.
inline BallCounts count_in_balls(EmbeddedSet const& centers, std::span<double const> radii,
                                 EmbeddedSet const& queries)
{
    detail::require(radii.size() == centers.size(), "one radius per center is required");
    BallCounts out{std::vector<std::size_t>(queries.size(), 0), std::vector<std::size_t>(centers.size(), 0)};
    for_each_distance_tile(queries, centers, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                 double const* tile) {
        std::size_t const cw = c1 - c0;
        for (std::size_t q = r0; q < r1; ++q) {
            double const* drow = tile + (q - r0) * cw;
            std::size_t hits = 0;
            for (std::size_t c = c0; c < c1; ++c) {
                if (drow[c - c0] <= radii[c]) {
                    ++hits;
                    ++out.center_count[c];
                }
            }
            out.query_count[q] += hits;
        }
    });
    return out;
}

inline BallCounts count_in_balls(EmbeddedSet const& centers, NeighborRadii const& radii, EmbeddedSet const& queries)
{
    return count_in_balls(centers, std::span<double const>(radii.radii), queries);
}

// ---------------------------------------------------------------------------
// Nearest neighbour
// ---------------------------------------------------------------------------

struct Neighbor
{
    std::size_t index = 0;
    double distance = 0.0;
};

/// Exact nearest member of `points`; ties go to the lowest index.
inline Neighbor nearest_neighbor(std::span<double const> query, EmbeddedSet const& points)
{
    detail::require(points.size() >= 1, "nearest neighbour of an empty set");
    detail::require(query.size() == points.dim(), "query dimension does not match the point set");
    Neighbor best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < points.size(); ++i) {
        double const d = std::sqrt(detail::squared_distance(query.data(), points.data() + i * points.dim(), query.size()));
        if (d < best.distance) best = {i, d};
    }
    return best;
}

/// Nearest member of `points` for every query; ties go to the lowest index.
inline std::vector<Neighbor> nearest_neighbors(EmbeddedSet const& queries, EmbeddedSet const& points)
{
    detail::require(points.size() >= 1, "nearest neighbour of an empty set");
    std::vector<Neighbor> best(queries.size(), Neighbor{0, std::numeric_limits<double>::infinity()});
    for_each_distance_tile(queries, points, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                double const* tile) {
        std::size_t const cw = c1 - c0;
        for (std::size_t q = r0; q < r1; ++q) {
            double const* drow = tile + (q - r0) * cw;
            for (std::size_t j = c0; j < c1; ++j)
                if (drow[j - c0] < best[q].distance) best[q] = {j, drow[j - c0]};
        }
    });
    return best;
}

/// For every query and every cut c_b (ascending), the distance to the nearest
/// of the first c_b candidates. Result is row-major queries x cuts; an empty
/// prefix gives +inf.
inline std::vector<double> nearest_within_prefixes(EmbeddedSet const& queries, EmbeddedSet const& candidates,
                                                   std::span<std::size_t const> cuts)
{
    detail::require(std::is_sorted(cuts.begin(), cuts.end()), "prefix cuts must be ascending");
    std::size_t const nb = cuts.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(queries.size() * nb, inf);
    if (nb == 0) return best;
    // bucket[j] = first cut that includes candidate j, nb if none does
    std::vector<std::size_t> bucket(candidates.size());
    for (std::size_t j = 0; j < candidates.size(); ++j)
        bucket[j] = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), j) - cuts.begin());
    for_each_distance_tile(queries, candidates, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                    double const* tile) {
        std::size_t const cw = c1 - c0;
        for (std::size_t q = r0; q < r1; ++q) {
            double const* drow = tile + (q - r0) * cw;
            double* b = best.data() + q * nb;
            for (std::size_t j = c0; j < c1; ++j) {
                std::size_t const k = bucket[j];
                if (k < nb && drow[j - c0] < b[k]) b[k] = drow[j - c0];
            }
        }
    });
    for (std::size_t q = 0; q < queries.size(); ++q) {
        double* b = best.data() + q * nb;
        for (std::size_t k = 1; k < nb; ++k) b[k] = std::min(b[k], b[k - 1]);
    }
    return best;
}

} // namespace fds
