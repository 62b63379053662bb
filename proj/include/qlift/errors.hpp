#pragma once

#include <stdexcept>
#include <string>

namespace qlift {

/// Base class for every error raised by the library. `code()` is a stable
/// machine-readable identifier used by the CLI's JSON error output.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Input violates a documented precondition (bad modulus, non-coprime CRT
/// moduli, singular matrix, ...).
class MalformedInput : public Error {
public:
    explicit MalformedInput(const std::string& detail) : Error("malformed_input", detail) {}
};

/// A randomized search ran out of its retry budget.
class BudgetExhausted : public Error {
public:
    explicit BudgetExhausted(const std::string& detail) : Error("budget_exhausted", detail) {}
};

/// A computed object failed its own verification. Always a bug.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& detail) : Error("internal_error", detail) {}
};

/// An equation system has no solution (e.g. different norms in the
/// norm-product solver).
class NoSolution : public Error {
public:
    explicit NoSolution(const std::string& detail) : Error("no_solution", detail) {}
};

#define QLIFT_CHECK(cond, msg)                                                  \
    do {                                                                        \
        if (!(cond)) throw ::qlift::InternalError(std::string(msg) + " [" #cond "]"); \
    } while (0)

}  // namespace qlift
