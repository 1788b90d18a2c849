#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ifde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A series or iteration hit its term/iteration cap before its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Two grid functions (or a function and a weight table) live on different grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// A documented precondition (contraction, anchor condition, theta range) failed.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// f(0, x, x) = x does not hold on the sampled ball.
class AnchorConditionError : public PreconditionError {
public:
    AnchorConditionError(const std::string& what, double worst_violation)
        : PreconditionError(what), worst_violation_(worst_violation) {}

    [[nodiscard]] double worst_violation() const noexcept { return worst_violation_; }

private:
    double worst_violation_;
};

/// A right-hand side returned a non-finite or wrongly sized value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}

    [[nodiscard]] std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

}  // namespace ifde
