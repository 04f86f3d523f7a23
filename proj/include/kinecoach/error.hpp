#pragma once

#include <stdexcept>
#include <string>

namespace kinecoach {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    explicit ParseError(const std::string& what) : ParseError(what, 0) {}

    // 1-based source line, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateObservationError : public Error {
public:
    DuplicateObservationError(long frame, const std::string& joint)
        : Error("duplicate observation for frame " + std::to_string(frame) + ", joint '" + joint + "'"),
          frame_(frame) {}
    long frame() const noexcept { return frame_; }

private:
    long frame_;
};

class MappingError : public Error {
public:
    using Error::Error;
};

class ImputationError : public Error {
public:
    using Error::Error;
};

class InsufficientFramesError : public Error {
public:
    using Error::Error;
};

class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

class MissingJointError : public Error {
public:
    using Error::Error;
};

class MissingEndEffectorError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class StatsError : public Error {
public:
    using Error::Error;
};

}  // namespace kinecoach
