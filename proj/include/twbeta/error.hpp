#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace tw {

enum class ErrorKind {
    InvalidParameter,
    Numerical,
    StabilityRefusal,
    Oracle,
};

/// Base exception for everything the library throws.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error(ErrorKind::InvalidParameter, what) {}
};

/// Failure while time stepping; carries the x level at which it happened.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double x)
        : Error(ErrorKind::Numerical, what + " (x = " + std::to_string(x) + ")"), x_(x) {}

    double x() const noexcept { return x_; }

private:
    double x_;
};

class StabilityRefusal : public Error {
public:
    explicit StabilityRefusal(const std::string& what) : Error(ErrorKind::StabilityRefusal, what) {}
};

class OracleFailure : public Error {
public:
    explicit OracleFailure(const std::string& what) : Error(ErrorKind::Oracle, what) {}
};

}  // namespace tw
