#pragma once

#include <stdexcept>
#include <string>

namespace offd {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind { usage = 1, data = 2, numeric = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Malformed or inconsistent input data (files, ids, labels, dimensions).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// Numerical failure (degenerate signal, solver breakdown).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

/// Invalid configuration or argument supplied by the caller.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

}  // namespace offd
