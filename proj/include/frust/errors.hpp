#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frust {

// Root of everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A contract violation: bad configuration, mismatched lengths, unknown
// sector, out-of-range parameter. CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The data itself makes the requested computation impossible. CLI exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

// Malformed input file content; `line` is 1-based.
class ParseError : public DataError {
public:
    ParseError(const std::string& message, std::size_t line)
        : DataError(message + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Series share no common dates.
class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

// Zero variance, or a sign requested for a pair whose |rho| fell inside the
// zero tolerance band.
class DegenerateDataError : public DataError {
public:
    using DataError::DataError;
};

// Too few points for the requested fit or scan.
class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

} // namespace frust
