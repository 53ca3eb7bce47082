#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vadminer {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input at a known 1-based line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a domain invariant (duplicate word, empty lexicon, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Generator configuration rejected.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A statistic is undefined because a variance is zero.
class DegenerateVarianceError : public Error {
public:
    DegenerateVarianceError() : Error("degenerate variance") {}
    using Error::Error;
};

/// Design matrix without full column rank.
class SingularDesignError : public Error {
public:
    explicit SingularDesignError(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

inline SingularDesignError::SingularDesignError(std::vector<std::string> columns)
    : Error([&] {
          std::string msg = "singular design; collinear columns:";
          for (const auto& c : columns) msg += " " + c;
          return msg;
      }()),
      columns_(std::move(columns)) {}

} // namespace vadminer
