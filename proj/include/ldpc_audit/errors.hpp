#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldpc_audit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Block or operand shapes do not conform.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Row, column or variable index outside the valid range.
class IndexError : public Error {
public:
    using Error::Error;
};

/// An operation was called on input that violates its contract
/// (column weight above 3, a selection that is not a (P)ESS, even N, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed matrix or circuit file.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit FormatError(const std::string& what) : Error(what) {}

    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// DECOMPOSE recursed deeper than the configured limit.
class DepthLimitError : public Error {
public:
    using Error::Error;
};

/// A circuit references a variable that no earlier component produces.
class WiringError : public Error {
public:
    using Error::Error;
};

}  // namespace ldpc_audit
