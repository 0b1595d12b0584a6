#pragma once

#include <stdexcept>
#include <string>

namespace eclkit {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configured depth/size budget exceeded. Not a mathematical failure.
class ResourceLimitError : public Error {
public:
    explicit ResourceLimitError(const std::string& msg) : Error(msg) {}
};

/// A mathematical precondition failed (inverse of an enclosure containing
/// zero, log of a non-positive enclosure, index out of range, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Syntax error with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& msg)
        : Error("parse error at " + std::to_string(line) + ":" +
                std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Certification could not be completed at the configured precision budget.
class CertifyError : public Error {
public:
    explicit CertifyError(const std::string& msg) : Error(msg) {}
};

} // namespace eclkit
