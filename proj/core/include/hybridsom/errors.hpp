#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hybridsom {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroVector : public Error {
public:
    ZeroVector() : Error("vector norm below 1e-12; cannot project onto the unit sphere") {}
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(actual)),
          expected_(expected),
          actual_(actual) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

// Raised when an update would have to renormalize a (near) zero vector.
class DegenerateUpdate : public Error {
public:
    explicit DegenerateUpdate(std::size_t neuron)
        : Error("degenerate update of neuron " + std::to_string(neuron) +
                ": pre-normalization norm below 1e-12"),
          neuron_(neuron) {}

    std::size_t neuron() const noexcept { return neuron_; }

private:
    std::size_t neuron_;
};

class UnknownLabel : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"),
          row_(row),
          column_(column) {}
    explicit ParseError(const std::string& what) : Error(what) {}

    // 1-based data row (the header is row 0) and 1-based column; 0 when unknown.
    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_ = 0;
    std::size_t column_ = 0;
};

class SpacingInfeasible : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Training aborted; carries the index of the offending event within the stream.
class FitError : public Error {
public:
    FitError(std::size_t event_index, std::size_t epoch, const std::string& cause)
        : Error("training failed at event " + std::to_string(event_index) + " (epoch " +
                std::to_string(epoch) + "): " + cause),
          event_index_(event_index),
          epoch_(epoch) {}

    std::size_t event_index() const noexcept { return event_index_; }
    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t event_index_;
    std::size_t epoch_;
};

}  // namespace hybridsom
