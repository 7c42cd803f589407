#pragma once

#include <stdexcept>
#include <string>

namespace rk {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad argument, unparseable input, or a violated tableau invariant.
/// CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Runtime numerical failure (non-finite values, blow-up).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Fixed-point iteration failed to reach tolerance.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : NumericalError(what), last_residual(last_residual) {}
    double last_residual;
};

}  // namespace rk
