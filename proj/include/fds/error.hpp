#pragma once

#include <stdexcept>
#include <string>

namespace fds {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold (k too large for
/// the set, mismatched dimensions, invalid hyperparameter).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Data does not match the schema it is being used with. `column` names the
/// offending column when there is one.
class SchemaError : public Error
{
public:
    SchemaError(std::string column, std::string const& what)
        : Error(column.empty() ? what : "column '" + column + "': " + what), column_(std::move(column))
    {
    }

    std::string const& column() const noexcept { return column_; }

private:
    std::string column_;
};

/// A numerical routine produced a non-finite value.
class NumericalError : public Error
{
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, std::string const& message)
{
    if (!condition) throw PreconditionError(message);
}

} // namespace detail

} // namespace fds
