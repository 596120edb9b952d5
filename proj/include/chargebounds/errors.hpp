#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chargebounds {

// Base of the library's error taxonomy. The C API and the CLI map these
// onto status / exit codes, so new error kinds should subclass one of the
// three below rather than this directly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: expression syntax, invalid modulus, bad configuration.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// A configured cap was exceeded: level cap, lcm budget, atom budget,
// LP size budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Precondition violations on library operations (donor shortage,
// element not present, modulus not dividing the primorial, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace chargebounds
