#pragma once

#include <stdexcept>
#include <string>

namespace inwave {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument domain (nonpositive density, radius, bad gamma, ...).
struct input_error : error {
    explicit input_error(const std::string& msg) : error(msg) {}
};

/// Sound speed reached zero (h <= 0) where positive h is required.
struct vacuum_error : error {
    explicit vacuum_error(const std::string& msg) : error(msg) {}
};

/// A wave speed is too close to zero for a stable division by c1 or c2.
struct sonic_error : error {
    explicit sonic_error(const std::string& msg) : error(msg) {}
};

/// A named admissibility condition failed; `condition` identifies it.
struct constraint_error : error {
    std::string condition;
    constraint_error(std::string cond, const std::string& msg)
        : error(msg), condition(std::move(cond)) {}
};

/// A generation request cannot be met; `condition` names the binding limit.
struct infeasible_error : constraint_error {
    infeasible_error(std::string cond, const std::string& msg)
        : constraint_error(std::move(cond), msg) {}
};

/// Numerical breakdown inside an algorithm (non-finite value, no bracket, ...).
struct numeric_error : error {
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

/// Filesystem / parsing failure; maps to the infrastructure exit code.
struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg) {}
};

}  // namespace inwave
