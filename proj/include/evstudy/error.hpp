#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evstudy {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `row()` is the 1-based data row (0 when the
/// problem is not tied to a row, e.g. a missing header column).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0)
        : Error(row == 0 ? what : "row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A precondition on a domain value was violated (empty sets, window
/// truncation, non-positive values under a log transform, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The design matrix is not of full column rank.
class RankError : public Error {
public:
    using Error::Error;
};

/// The LAD linear program failed to reach an optimal vertex.
class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace evstudy
