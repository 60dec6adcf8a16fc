#pragma once

#include <stdexcept>
#include <string>

namespace foilspace {

// Base of every error the library throws. `kind()` is a stable machine-readable
// tag used by the CLI's JSON error output.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

// A caller broke a documented precondition (shape mismatch, empty input, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "contract_violation"; }
};

// A scalar argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

// Out-of-box coordinates on normalize/denormalize.
class RangeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "range_error"; }
};

// Least-squares design matrix is rank deficient.
class IllPosedFit : public Error {
public:
    IllPosedFit(const std::string& what, long rank, long columns)
        : Error(what), rank_(rank), columns_(columns) {}
    const char* kind() const noexcept override { return "ill_posed_fit"; }
    long rank() const noexcept { return rank_; }
    long columns() const noexcept { return columns_; }

private:
    long rank_;
    long columns_;
};

// Linear system too close to singular to trust.
class ConditioningError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "conditioning_error"; }
};

// Eigenvalues carry no usable gap (all at the floor).
class NoStructure : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "no_structure"; }
};

// The round-nose derivative is singular at the leading edge.
class SingularityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "singularity"; }
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = 0) : Error(what), line_(line) {}
    const char* kind() const noexcept override { return "parse_error"; }
    long line() const noexcept { return line_; }

private:
    long line_;
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io_error"; }
};

// A single QoI evaluation failed; `row` is the sample index when evaluated in batch.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, long row = -1) : Error(what), row_(row) {}
    const char* kind() const noexcept override { return "evaluation_error"; }
    long row() const noexcept { return row_; }

private:
    long row_;
};

}  // namespace foilspace
