#pragma once

#include <stdexcept>
#include <string>

namespace lamc {

// File could not be parsed at all (bad structure, unreadable token, empty input).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Content parsed but violates a data invariant (label not in {0,1}, NaN feature, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configuration value is out of its legal range.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Vector/matrix dimensions do not agree, or an index is out of range.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimization aborted (non-finite loss or parameters); message carries epoch/batch.
class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

// A metric is undefined on the given input (every instance skipped).
class MetricError : public std::runtime_error {
public:
    explicit MetricError(const std::string& msg) : std::runtime_error(msg) {}
};

// I/O failure surfaced with the offending path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace lamc
