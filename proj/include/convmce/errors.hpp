#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace convmce {

// Caller passed mismatched or malformed arguments (dimension/field mismatch,
// invalid error pattern handed to encrypt, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Mathematically undefined request, e.g. inverting zero.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// No valid object exists for the requested parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent file contents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The inner block decoder could not decode the coefficient at `time_index`.
class DecodeFailure : public std::runtime_error {
public:
    DecodeFailure(std::int64_t time_index, const std::string& what)
        : std::runtime_error(what + " (time index " + std::to_string(time_index) + ")"),
          time_index_(time_index) {}

    std::int64_t time_index() const noexcept { return time_index_; }

private:
    std::int64_t time_index_;
};

}  // namespace convmce
