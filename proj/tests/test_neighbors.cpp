#include "oracles.hpp"

#include <fds/neighbors.hpp>

#include <gtest/gtest.h>

using namespace fds;

namespace {

EmbeddedSet line(std::vector<double> xs)
{
    std::size_t const n = xs.size();
    return EmbeddedSet(n, 1, std::move(xs));
}

} // namespace

TEST(Neighbors, HandRadii)
{
    auto const r = knn_radii(line({0, 1, 3}), 1);
    EXPECT_EQ(r.radii, (std::vector<double>{1, 1, 2}));
}

TEST(Neighbors, SelfIncludedFirstNeighbourIsZero)
{
    auto const r = knn_radii(line({0, 1, 3}), 1, false);
    EXPECT_EQ(r.radii, (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(knn_radii(line({0, 1, 3}), 2, false).radii, (std::vector<double>{1, 1, 2}));
}

TEST(Neighbors, KOutOfRange)
{
    EXPECT_THROW(knn_radii(line({0, 1, 3}), 3), PreconditionError);
    EXPECT_THROW(knn_radii(line({0, 1, 3}), 0), PreconditionError);
    EXPECT_NO_THROW(knn_radii(line({0, 1, 3}), 3, false));
}

TEST(Neighbors, HandBallCounts)
{
    auto const centers = line({0, 1, 3});
    std::vector<double> const radii{1, 1, 2};
    auto const c = count_in_balls(centers, radii, line({0.5, 10}));
    EXPECT_EQ(c.query_count, (std::vector<std::size_t>{2, 0}));
    EXPECT_EQ(c.center_count, (std::vector<std::size_t>{1, 1, 0}));
}

TEST(Neighbors, BallsAreClosed)
{
    auto const c = count_in_balls(line({0}), std::vector<double>{1.0}, line({1.0, -1.0, 1.0000000001}));
    EXPECT_EQ(c.query_count, (std::vector<std::size_t>{1, 1, 0}));
}

TEST(Neighbors, HandNearest)
{
    std::vector<double> const q{2.9};
    auto const n = nearest_neighbor(q, line({0, 1, 3}));
    EXPECT_EQ(n.index, 2u);
    EXPECT_NEAR(n.distance, 0.1, 1e-15);
}

TEST(Neighbors, NearestTiesGoToLowestIndex)
{
    std::vector<double> const q{1.0};
    EXPECT_EQ(nearest_neighbor(q, line({0, 2, 0, 2})).index, 0u);
    auto const all = nearest_neighbors(line({1.0, 2.0}), line({0, 2, 0, 2}));
    EXPECT_EQ(all[0].index, 0u);
    EXPECT_EQ(all[1].index, 1u);
}

TEST(Neighbors, DistanceIsSymmetricBitwise)
{
    std::mt19937_64 eng(5);
    auto const inst = oracle::random_instance(eng, 80, 40);
    std::vector<double> ab, ba;
    for_each_distance_tile(inst.points, inst.queries, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                          double const* t) {
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                if (i == 3) ab.push_back(t[(i - r0) * (c1 - c0) + (j - c0)]);
    });
    for_each_distance_tile(inst.queries, inst.points, [&](std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                                                          double const* t) {
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j)
                if (j == 3) ba.push_back(t[(i - r0) * (c1 - c0) + (j - c0)]);
    });
    EXPECT_EQ(ab, ba);
}

TEST(Neighbors, RandomInstancesMatchOracle)
{
    std::mt19937_64 eng(2024);
    for (int t = 0; t < 60; ++t) {
        auto const inst = oracle::random_instance(eng);
        auto const p = oracle::rows(inst.points);
        auto const q = oracle::rows(inst.queries);
        auto const want = oracle::knn_radii(p, inst.k);
        auto const got = knn_radii(inst.points, inst.k);
        for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(got.radii[i], want[i], 1e-12) << "instance " << t;
        auto const cw = oracle::count_in_balls(p, want, q);
        auto const cg = count_in_balls(inst.points, got, inst.queries);
        ASSERT_EQ(cg.query_count, cw) << "instance " << t;
        auto const nn = nearest_neighbors(inst.queries, inst.points);
        for (std::size_t i = 0; i < q.size(); ++i) {
            auto const [j, d] = oracle::nearest(q[i], p);
            ASSERT_EQ(nn[i].index, j) << "instance " << t;
            ASSERT_NEAR(nn[i].distance, d, 1e-12);
            auto const single = nearest_neighbor(inst.queries.row(i), inst.points);
            ASSERT_EQ(single.index, j);
        }
    }
}

TEST(Neighbors, NearestWithinPrefixes)
{
    auto const cand = line({10, 0, 5, 1});
    std::vector<std::size_t> const cuts{0, 1, 3, 4};
    auto const b = nearest_within_prefixes(line({1.2}), cand, cuts);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_TRUE(std::isinf(b[0]));
    EXPECT_NEAR(b[1], 8.8, 1e-12);
    EXPECT_NEAR(b[2], 1.2, 1e-12);
    EXPECT_NEAR(b[3], 0.2, 1e-12);
}
