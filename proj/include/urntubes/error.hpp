#pragma once

#include <stdexcept>
#include <string>

namespace urntubes {

// Precondition violations: invalid parameters, inconsistent urns/tubes.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Conditioning on a predicate with zero validity. Kept distinct from
// DomainError so callers can tell "bad input" from "impossible evidence".
class ConditioningError : public std::runtime_error {
public:
    explicit ConditioningError(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration guards (e.g. the sequence oracle refusing |X|^K blowup).
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Text-spec syntax errors, with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace urntubes
