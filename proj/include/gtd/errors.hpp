#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace gtd {

namespace detail {

// Compact real formatting for diagnostics.
inline std::string show(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace detail

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated a precondition (bad index, shape mismatch, unknown name...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A point lies outside the domain of a potential or elementary function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Metric determinant is below the degeneracy threshold at the requested point.
class DegenerateMetricError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace gtd
