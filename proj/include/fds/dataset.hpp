#pragma once

#include <fds/error.hpp>
#include <fds/random.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace fds {

// ---------------------------------------------------------------------------
// EmbeddedSet
// ---------------------------------------------------------------------------

/// n x m matrix of embedded points, row-major, plus its role. Every metric
/// consumes these.
class EmbeddedSet
{
public:
    EmbeddedSet() = default;

    EmbeddedSet(std::size_t rows, std::size_t cols, std::vector<double> values, Role tag = Role::real)
        : rows_(rows), cols_(cols), values_(std::move(values)), tag_(tag)
    {
        detail::require(rows_ >= 1 && cols_ >= 1, "embedded set must have at least one row and one column");
        detail::require(values_.size() == rows_ * cols_, "embedded set value count does not match its shape");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw NumericalError("embedded set entry (" + std::to_string(i / cols_) + ", " +
                                     std::to_string(i % cols_) + ") is not finite");
        }
    }

    /// Row-per-point convenience constructor.
    static EmbeddedSet from_rows(std::vector<std::vector<double>> const& rows, Role tag = Role::real)
    {
        detail::require(!rows.empty(), "embedded set must have at least one row");
        std::size_t const cols = rows.front().size();
        std::vector<double> values;
        values.reserve(rows.size() * cols);
        for (auto const& r : rows) {
            detail::require(r.size() == cols, "all rows must have the same dimension");
            values.insert(values.end(), r.begin(), r.end());
        }
        return EmbeddedSet(rows.size(), cols, std::move(values), tag);
    }

    std::size_t size() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return cols_; }
    Role tag() const noexcept { return tag_; }
    void set_tag(Role tag) noexcept { tag_ = tag; }

    std::span<double const> row(std::size_t i) const noexcept { return {values_.data() + i * cols_, cols_}; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
    double const* data() const noexcept { return values_.data(); }
    std::vector<double> const& values() const noexcept { return values_; }

    friend bool operator==(EmbeddedSet const&, EmbeddedSet const&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    Role tag_ = Role::real;
};

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

enum class ColumnKind
{
    numerical,
    categorical,
};

struct ColumnSpec
{
    std::string name;
    ColumnKind kind = ColumnKind::numerical;
    std::size_t categories = 0; // categorical only

    static ColumnSpec numerical(std::string name) { return {std::move(name), ColumnKind::numerical, 0}; }
    static ColumnSpec categorical(std::string name, std::size_t count)
    {
        return {std::move(name), ColumnKind::categorical, count};
    }

    friend bool operator==(ColumnSpec const&, ColumnSpec const&) = default;
};

using Schema = std::vector<ColumnSpec>;

/// Raw tabular records. Categorical cells hold their category index.
class Dataset
{
public:
    Dataset() = default;

    Dataset(Schema schema, std::vector<double> values) : schema_(std::move(schema)), values_(std::move(values))
    {
        detail::require(!schema_.empty(), "dataset needs at least one column");
        detail::require(values_.size() % schema_.size() == 0, "dataset value count is not a multiple of its arity");
        rows_ = values_.size() / schema_.size();
        detail::require(rows_ >= 1, "dataset needs at least one row");
        for (std::size_t j = 0; j < schema_.size(); ++j) {
            auto const& col = schema_[j];
            if (col.kind == ColumnKind::categorical && col.categories == 0)
                throw SchemaError(col.name, "categorical column declares zero categories");
            for (std::size_t i = 0; i < rows_; ++i) {
                double const v = values_[i * schema_.size() + j];
                if (!std::isfinite(v)) throw SchemaError(col.name, "row " + std::to_string(i) + " is not finite");
                if (col.kind == ColumnKind::categorical &&
                    (v < 0 || v != std::floor(v) || v >= static_cast<double>(col.categories)))
                    throw SchemaError(col.name, "row " + std::to_string(i) + " holds category " + std::to_string(v) +
                                                    " outside [0, " + std::to_string(col.categories) + ")");
            }
        }
    }

    /// All-numerical dataset viewing an embedded set's coordinates as columns x0..x{m-1}.
    static Dataset numerical(EmbeddedSet const& points)
    {
        Schema schema;
        schema.reserve(points.dim());
        for (std::size_t j = 0; j < points.dim(); ++j) schema.push_back(ColumnSpec::numerical("x" + std::to_string(j)));
        return Dataset(std::move(schema), points.values());
    }

    std::size_t size() const noexcept { return rows_; }
    std::size_t arity() const noexcept { return schema_.size(); }
    Schema const& schema() const noexcept { return schema_; }
    std::vector<double> const& values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * schema_.size() + j]; }
    std::span<double const> row(std::size_t i) const noexcept
    {
        return {values_.data() + i * schema_.size(), schema_.size()};
    }

    friend bool operator==(Dataset const&, Dataset const&) = default;

private:
    Schema schema_;
    std::vector<double> values_;
    std::size_t rows_ = 0;
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

NLOHMANN_JSON_SERIALIZE_ENUM(ColumnKind, {{ColumnKind::numerical, "numerical"}, {ColumnKind::categorical, "categorical"}})

inline void to_json(nlohmann::json& j, ColumnSpec const& c)
{
    j = nlohmann::json{{"name", c.name}, {"kind", c.kind}};
    if (c.kind == ColumnKind::categorical) j["categories"] = c.categories;
}

inline void from_json(nlohmann::json const& j, ColumnSpec& c)
{
    j.at("name").get_to(c.name);
    j.at("kind").get_to(c.kind);
    c.categories = c.kind == ColumnKind::categorical ? j.at("categories").get<std::size_t>() : 0;
}

inline nlohmann::json schema_to_json(Schema const& schema) { return nlohmann::json{{"columns", schema}}; }

inline Schema schema_from_json(nlohmann::json const& j)
{
    if (!j.is_object() || !j.contains("columns")) throw SchemaError("columns", "schema must be an object with a 'columns' array");
    return j.at("columns").get<Schema>();
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw Error("failed to format double");
    return std::string(buf, end);
}

inline double parse_double(std::string_view text, std::string const& context)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw SchemaError(context, "cannot parse '" + std::string(text) + "' as a number");
    return v;
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

} // namespace detail

/// Header row with column names, then one record per line.
inline void write_csv(std::ostream& out, Dataset const& data)
{
    auto const& schema = data.schema();
    for (std::size_t j = 0; j < schema.size(); ++j) out << (j ? "," : "") << schema[j].name;
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < schema.size(); ++j) out << (j ? "," : "") << format_double(data(i, j));
        out << '\n';
    }
}

/// Reads a CSV written against `schema`. The header must name the schema's
/// columns in order.
inline Dataset read_csv(std::istream& in, Schema const& schema)
{
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("", "empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = detail::split_csv_line(line);
    if (header.size() != schema.size())
        throw SchemaError("", "CSV header has " + std::to_string(header.size()) + " columns, schema declares " +
                                  std::to_string(schema.size()));
    for (std::size_t j = 0; j < schema.size(); ++j) {
        if (header[j] != schema[j].name)
            throw SchemaError(schema[j].name, "CSV header column " + std::to_string(j) + " is '" +
                                                  std::string(header[j]) + "'");
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != schema.size())
            throw SchemaError("", "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                      " fields, expected " + std::to_string(schema.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) values.push_back(parse_double(fields[j], schema[j].name));
    }
    return Dataset(schema, std::move(values));
}

} // namespace fds
