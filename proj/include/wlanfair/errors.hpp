#pragma once

#include <stdexcept>
#include <string>

namespace wlanfair {

// Thrown when a model evaluation leaves the representable double range
// (typically the B-th power terms for large U and B).
class NumericRangeError : public std::runtime_error {
public:
    explicit NumericRangeError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when every candidate root of a model polynomial fails the
// physical-acceptance filter.
class NoPhysicalRootError : public std::runtime_error {
public:
    explicit NoPhysicalRootError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration and data-file problems, with file/line context when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string file, int line, const std::string& msg)
        : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + msg
                                      : file + ": " + msg),
          file_(std::move(file)), line_(line) {}
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg), line_(0) {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_ = 0;
};

}  // namespace wlanfair
