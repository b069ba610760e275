#pragma once

#include <fds/dataset.hpp>
#include <fds/error.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace fds {

/// Tabular embedding fitted on real data: z-score for numerical columns,
/// one-hot for categorical ones. Output coordinates follow column order.
struct EmbeddingSpec
{
    struct Column
    {
        std::string name;
        ColumnKind kind = ColumnKind::numerical;
        double mean = 0.0;     // numerical
        double std_dev = 1.0;  // numerical, > 0
        std::size_t offset = 0;
        std::size_t width = 1; // 1 for numerical, category count for categorical

        friend bool operator==(Column const&, Column const&) = default;
    };

    std::vector<Column> columns;
    std::size_t dim = 0;
    std::vector<std::string> warnings;

    friend bool operator==(EmbeddingSpec const&, EmbeddingSpec const&) = default;
};

/// Population statistics (divide by n). A constant column keeps std 1 and
/// records a warning.
inline EmbeddingSpec fit_tabular_embedding(Dataset const& real)
{
    detail::require(real.size() >= 2, "fitting the tabular embedding needs at least two real rows");
    EmbeddingSpec spec;
    std::size_t offset = 0;
    auto const n = static_cast<double>(real.size());
    for (std::size_t j = 0; j < real.arity(); ++j) {
        ColumnSpec const& col = real.schema()[j];
        EmbeddingSpec::Column out{col.name, col.kind, 0.0, 1.0, offset, 1};
        if (col.kind == ColumnKind::numerical) {
            double sum = 0.0;
            for (std::size_t i = 0; i < real.size(); ++i) sum += real(i, j);
            double const mean = sum / n;
            double ss = 0.0;
            for (std::size_t i = 0; i < real.size(); ++i) {
                double const d = real(i, j) - mean;
                ss += d * d;
            }
            double const sd = std::sqrt(ss / n);
            out.mean = mean;
            if (sd > 0.0 && std::isfinite(sd)) {
                out.std_dev = sd;
            } else {
                out.std_dev = 1.0;
                spec.warnings.push_back("column '" + col.name + "' is constant on real data; using std 1");
            }
        } else {
            out.width = col.categories;
        }
        offset += out.width;
        spec.columns.push_back(std::move(out));
    }
    spec.dim = offset;
    return spec;
}

inline EmbeddedSet apply_embedding(EmbeddingSpec const& spec, Dataset const& data, Role tag = Role::real)
{
    if (data.arity() != spec.columns.size())
        throw SchemaError("", "dataset has " + std::to_string(data.arity()) + " columns, embedding expects " +
                                  std::to_string(spec.columns.size()));
    for (std::size_t j = 0; j < spec.columns.size(); ++j) {
        auto const& want = spec.columns[j];
        auto const& have = data.schema()[j];
        if (have.name != want.name)
            throw SchemaError(want.name, "dataset column " + std::to_string(j) + " is named '" + have.name + "'");
        if (have.kind != want.kind) throw SchemaError(want.name, "column kind differs from the fitted embedding");
        if (have.kind == ColumnKind::categorical && have.categories != want.width)
            throw SchemaError(want.name, "declares " + std::to_string(have.categories) + " categories, embedding has " +
                                             std::to_string(want.width));
    }
    std::vector<double> out(data.size() * spec.dim, 0.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        double* dst = out.data() + i * spec.dim;
        for (std::size_t j = 0; j < spec.columns.size(); ++j) {
            auto const& col = spec.columns[j];
            double const v = data(i, j);
            if (col.kind == ColumnKind::numerical)
                dst[col.offset] = (v - col.mean) / col.std_dev;
            else
                dst[col.offset + static_cast<std::size_t>(v)] = 1.0;
        }
    }
    return EmbeddedSet(data.size(), spec.dim, std::move(out), tag);
}

/// Fits on `real`, embeds both sets with the real-data statistics.
inline std::pair<EmbeddedSet, EmbeddedSet> embed_pair(Dataset const& real, Dataset const& synthetic)
{
    auto const spec = fit_tabular_embedding(real);
    return {apply_embedding(spec, real, Role::real), apply_embedding(spec, synthetic, Role::synthetic)};
}

inline void to_json(nlohmann::json& j, EmbeddingSpec::Column const& c)
{
    j = nlohmann::json{{"name", c.name}, {"kind", c.kind}, {"offset", c.offset}, {"width", c.width}};
    if (c.kind == ColumnKind::numerical) {
        j["mean"] = c.mean;
        j["std"] = c.std_dev;
    }
}

inline void from_json(nlohmann::json const& j, EmbeddingSpec::Column& c)
{
    j.at("name").get_to(c.name);
    j.at("kind").get_to(c.kind);
    j.at("offset").get_to(c.offset);
    j.at("width").get_to(c.width);
    if (c.kind == ColumnKind::numerical) {
        j.at("mean").get_to(c.mean);
        j.at("std").get_to(c.std_dev);
    }
}

inline void to_json(nlohmann::json& j, EmbeddingSpec const& s)
{
    j = nlohmann::json{{"dim", s.dim}, {"columns", s.columns}, {"warnings", s.warnings}};
}

inline void from_json(nlohmann::json const& j, EmbeddingSpec& s)
{
    j.at("dim").get_to(s.dim);
    j.at("columns").get_to(s.columns);
    s.warnings = j.value("warnings", std::vector<std::string>{});
}

} // namespace fds
