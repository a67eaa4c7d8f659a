#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace hbtamp {

/// %g rendering for error messages.
inline std::string short_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (negative photon
/// numbers, undefined ratios, unidentifiable fits).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iteration or memory budget exhausted before the requested accuracy.
class ResourceError : public Error {
public:
    ResourceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A configuration the model carries but cannot evaluate (pump phase != 0).
class UnsupportedConfiguration : public Error {
public:
    using Error::Error;
};

/// Fock-space truncation too small for the requested state.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double achieved_deficit, int suggested_dim)
        : Error(what), achieved_deficit_(achieved_deficit), suggested_dim_(suggested_dim) {}
    double achieved_deficit() const noexcept { return achieved_deficit_; }
    int suggested_dim() const noexcept { return suggested_dim_; }

private:
    double achieved_deficit_;
    int suggested_dim_;
};

class DegenerateFitError : public Error {
public:
    using Error::Error;
};

class UnreachableTargetError : public Error {
public:
    using Error::Error;
};

class DivisionError : public Error {
public:
    using Error::Error;
};

}  // namespace hbtamp
