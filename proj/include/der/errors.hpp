#pragma once

#include <stdexcept>
#include <string>

namespace der {

// Malformed input data (edge lists, partition files).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Structurally invalid input to an operation (degenerate graph, empty
// cluster, mismatched vertex sets).
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace der
