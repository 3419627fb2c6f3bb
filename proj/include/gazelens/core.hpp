// Core value types shared by every stage of the gaze pipeline.
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gazelens {

template <typename Scalar>
using Point2T = Eigen::Matrix<Scalar, 2, 1>;

/// Screen-space point in pixels (or normalized units before `to_screen`).
using Point2 = Point2T<double>;

/// Milliseconds since session start.
using Millis = std::int64_t;

using LevelId = int;

struct GazeSample {
    Millis timestamp = 0;
    Point2 pos = Point2::Zero();
    LevelId level = 0;
    std::string event;

    bool operator==(const GazeSample&) const = default;
};

enum class EventKind { target, click, other };

const char* to_string(EventKind kind);

/// A game event on the session timeline. Timeline events survive gaze
/// filtering even when the row they came from is removed from the stream.
struct TimelineEvent {
    Millis timestamp = 0;
    EventKind kind = EventKind::other;
    std::string payload;
    LevelId level = 0;

    bool operator==(const TimelineEvent&) const = default;
};

/// Collects non-fatal warnings raised while processing.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
    bool empty() const { return warnings.empty(); }
};

// Error hierarchy. Each leaf maps to one CLI exit code.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row)
        : Error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

class MissingCoordinateError : public ParseError {
public:
    using ParseError::ParseError;
};

class EmptySessionError : public Error {
public:
    using Error::Error;
};

class OrderingError : public Error {
public:
    using Error::Error;
};

class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class SpecError : public Error {
public:
    using Error::Error;
};

}  // namespace gazelens
