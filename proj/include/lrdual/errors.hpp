#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrdual {

/// Base of every error thrown by the library. `exit_code()` is the CLI status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept = 0;
};

/// Bad configuration: a field is missing, out of its documented range, or inconsistent.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }
    int exit_code() const noexcept override { return 1; }

private:
    std::string field_;
};

/// Step index outside 1..T.
class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A mathematically undefined request (EMA smoothing outside [0,1), zero weight decay, ...).
class DomainError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// A target coefficient profile that no smoothing schedule can generate.
class InfeasibleError : public DomainError {
public:
    InfeasibleError(std::size_t index, const std::string& what)
        : DomainError("index " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Optimizer state became non-finite.
class DivergenceError : public Error {
public:
    DivergenceError(std::size_t step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const noexcept { return step_; }
    int exit_code() const noexcept override { return 3; }

private:
    std::size_t step_;
};

class IoError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

}  // namespace lrdual
