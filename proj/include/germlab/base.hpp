#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace germlab {

// Bad input: unparsable documents, malformed words, invalid flags.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a contract (bad permutation,
// undeclared generator, family constraint, alphabet mismatch).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured cap was hit where the operation cannot continue.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal invariant failed; signals a bug, not a user error.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw validation_error(msg);
}

inline void check_invariant(bool cond, const std::string& msg) {
    if (!cond) throw internal_error(msg);
}

} // namespace germlab
