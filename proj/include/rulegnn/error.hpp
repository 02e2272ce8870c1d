#pragma once

#include <stdexcept>
#include <string>

namespace rulegnn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the file and 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Input that parses but violates a structural invariant (edge crossing graphs, missing file).
class DataError : public Error {
public:
    using Error::Error;
};

/// Caller supplied an invalid argument (bad permutation, kernel too large, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Precondition between cooperating components does not hold (dimension mismatch, label above cap).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A computation exceeded its configured budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A generator or experiment specification is inconsistent.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Training diverged or otherwise failed at runtime.
class RuntimeFailure : public Error {
public:
    using Error::Error;
};

} // namespace rulegnn
