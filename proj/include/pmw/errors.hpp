#pragma once

#include <stdexcept>
#include <string>

namespace pmw {

// Malformed input text.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

// Structurally well-formed data violating a contract (naturality,
// commutativity, poset mismatch, bad precondition).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};

// Operation requested on data of the wrong kind (e.g. diagram distance on a
// grid module, --epi on a non-surjective morphism).
struct ModeError : std::runtime_error {
    explicit ModeError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace pmw
