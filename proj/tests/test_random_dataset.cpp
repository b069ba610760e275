#include <fds/dataset.hpp>
#include <fds/random.hpp>

#include <gtest/gtest.h>

#include <bit>
#include <set>
#include <sstream>

using namespace fds;

TEST(RandomSource, SameSeedAndPathGiveSameDraws)
{
    auto const path = StreamPath::cell("check", "variant", 3, 0, Role::real);
    auto a = RandomSource(42, path).engine();
    auto b = RandomSource(42, path).engine();
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomSource, DistinctPathsDoNotCollide)
{
    std::set<std::uint64_t> first;
    for (std::uint64_t i = 0; i < 10000; ++i) {
        auto eng = RandomSource(42, StreamPath{i / 100, i % 100}).engine();
        first.insert(eng());
    }
    EXPECT_EQ(first.size(), 10000u);
}

TEST(RandomSource, SeedsSeparateStreams)
{
    StreamPath const p{7, 1};
    auto a = RandomSource(1, p).engine();
    auto b = RandomSource(2, p).engine();
    int equal = 0;
    for (int i = 0; i < 16; ++i) equal += a() == b();
    EXPECT_EQ(equal, 0);
}

TEST(RandomSource, PathIsPositional)
{
    EXPECT_NE(RandomSource(1, StreamPath{1, 2}).key(), RandomSource(1, StreamPath{2, 1}).key());
    EXPECT_NE(RandomSource(1, StreamPath::cell("c", "v", 0, 0, Role::real)).key(),
              RandomSource(1, StreamPath::cell("c", "v", 0, 0, Role::synthetic)).key());
}

TEST(RandomSource, DeriveStreamAppendsPath)
{
    RandomSource const master(9, StreamPath{1});
    auto const child = derive_stream(master, StreamPath{2, 3});
    EXPECT_EQ(child.key(), RandomSource(9, StreamPath{1, 2, 3}).key());
    EXPECT_EQ(child.seed(), 9u);
}

TEST(EmbeddedSet, RejectsNonFiniteAndBadShape)
{
    EXPECT_THROW(EmbeddedSet(2, 1, {1.0, std::nan("")}), NumericalError);
    EXPECT_THROW(EmbeddedSet(2, 2, {1.0, 2.0, 3.0}), PreconditionError);
    EXPECT_THROW(EmbeddedSet(0, 1, {}), PreconditionError);
    EXPECT_THROW(EmbeddedSet::from_rows({{1.0}, {1.0, 2.0}}), PreconditionError);
}

TEST(Dataset, ValidatesCategories)
{
    Schema const s{ColumnSpec::numerical("x"), ColumnSpec::categorical("c", 3)};
    EXPECT_NO_THROW(Dataset(s, {0.5, 2.0, 1.5, 0.0}));
    EXPECT_THROW(Dataset(s, {0.5, 3.0}), SchemaError);
    EXPECT_THROW(Dataset(s, {0.5, 1.5}), SchemaError);
    EXPECT_THROW(Dataset(s, {0.5, 1.0, 2.0}), PreconditionError);
    EXPECT_THROW(Dataset({ColumnSpec::categorical("c", 0)}, {0.0}), SchemaError);
}

TEST(Dataset, CsvRoundTripIsBitExact)
{
    Schema const s{ColumnSpec::numerical("x"), ColumnSpec::categorical("c", 4), ColumnSpec::numerical("y")};
    std::vector<double> values{0.1, 0, -1e-300, 1.0 / 3.0, 3, 12345.678901234567, -0.0, 2, 2.5e-300};
    Dataset const d(s, values);
    std::ostringstream out;
    write_csv(out, d);
    std::istringstream in(out.str());
    Dataset const back = read_csv(in, s);
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back.values()[i]), std::bit_cast<std::uint64_t>(values[i])) << i;
}

TEST(Dataset, CsvHeaderMismatchNamesColumn)
{
    Schema const s{ColumnSpec::numerical("x"), ColumnSpec::numerical("y")};
    std::istringstream in("x,z\n1,2\n");
    try {
        read_csv(in, s);
        FAIL() << "expected SchemaError";
    } catch (SchemaError const& e) {
        EXPECT_NE(std::string(e.what()).find('y'), std::string::npos);
    }
}

TEST(Dataset, SchemaJson)
{
    auto const j = nlohmann::json::parse(R"({"columns":[{"name":"a","kind":"numerical"},
                                                          {"name":"b","kind":"categorical","categories":2}]})");
    auto const s = schema_from_json(j);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[1], ColumnSpec::categorical("b", 2));
    EXPECT_EQ(schema_from_json(schema_to_json(s)), s);
}
