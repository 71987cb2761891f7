#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fruitpal {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (bad box, confidence out of range, ...).
class InvalidValue : public Error {
public:
    using Error::Error;
};

/// Unknown label or malformed token in an external format.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Bad configuration: non-positive PIR parts, ratio sums, times of day.
class ConfigError : public Error {
public:
    using Error::Error;
};

class FrameNotFound : public Error {
public:
    explicit FrameNotFound(const std::string& frame_id)
        : Error("frame not found: " + frame_id), frame_id_(frame_id) {}

    const std::string& frame_id() const noexcept { return frame_id_; }

private:
    std::string frame_id_;
};

/// Manifest record failed to parse or validate; carries the 1-based line.
class ManifestError : public Error {
public:
    ManifestError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DayComplete : public Error {
public:
    DayComplete() : Error("tracker already saw 24 hourly ticks; reset required") {}
};

class PublishError : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

}  // namespace fruitpal
