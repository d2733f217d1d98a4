#ifndef PHASORTRACK_ERRORS_HPP
#define PHASORTRACK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phasortrack {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A domain type invariant was violated (bad signal, structure, or params).
class ModelError : public Error {
public:
    using Error::Error;
};

/// A modeled frequency fell outside the representable band (-pi, pi).
class FrequencyRangeError : public ModelError {
public:
    using ModelError::ModelError;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Segment has fewer samples than modeled components.
class UnderdeterminedModelError : public Error {
public:
    using Error::Error;
};

/// Model columns are (numerically) linearly dependent.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

class InvalidSegmentLengthError : public Error {
public:
    using Error::Error;
};

class InvalidFftSizeError : public Error {
public:
    using Error::Error;
};

/// No usable spectral peak found while initializing an estimate.
class InitializationFailureError : public Error {
public:
    using Error::Error;
};

/// Gradient descent produced a non-finite loss/gradient or escaped the
/// valid frequency band. Carries the iteration (1-based) and, when the
/// fit ran inside a tracking loop, the segment index.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, int iteration, int segment = -1)
        : Error(msg), iteration(iteration), segment(segment) {}

    int iteration;
    int segment;
};

/// Configuration file or flag rejected; `key` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& msg)
        : Error(key + ": " + msg), key(key) {}

    std::string key;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed CSV row; `line` is 1-based.
class CsvParseError : public IoError {
public:
    CsvParseError(const std::string& msg, std::size_t line)
        : IoError(msg + " (line " + std::to_string(line) + ")"), line(line) {}

    std::size_t line;
};

} // namespace phasortrack

#endif // PHASORTRACK_ERRORS_HPP
