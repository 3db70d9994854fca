#pragma once

#include <stdexcept>
#include <string>

namespace hypergeom {

// Invalid parameters, malformed input, contract violations by the caller.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested result cannot be produced at the requested p-adic / t-adic
// precision (division by a zero marker, exhausted digits, tail not below
// the working modulus, rounding window ambiguous, ...).
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hypergeom
