#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbl {

/// Operands built for different ambient dimensions were combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (space strings, lattice expressions).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at offset " + std::to_string(offset)),
          message_(message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t offset_;
};

/// A well-formed request whose parameters violate a precondition
/// (enumeration caps, divergent sequences, out-of-range indices).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An expression produced NaN or infinity during evaluation.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fbl
