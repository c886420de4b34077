#pragma once

#include <stdexcept>
#include <string>

namespace qwts {

/// A parameter lies outside its closed domain interval.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The path oracle was asked for more steps than its enumeration cap.
class OracleCapError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace qwts
