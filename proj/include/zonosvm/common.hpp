#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zonosvm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Eigen::Index;

inline constexpr std::string_view kVersion = "0.1.0";

// Input that failed to parse; `line` is the 1-based line number in the source stream.
class ParseError : public std::runtime_error {
public:
    ParseError(long line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Structurally well-formed input that violates a semantic requirement
// (single-class data, non-finite coordinates, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap before reaching its tolerance.
// Subclasses carry the best iterate found so far.
class NonconvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The ellipsoid shape matrix lost positive definiteness beyond repair.
class ConditioningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Asking a degenerate (w = 0) classifier for a decision value.
class UndefinedClassifierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace zonosvm
