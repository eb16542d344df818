#pragma once

#include <stdexcept>
#include <string>

namespace afrac {

// Violated precondition or malformed input.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure could not reach its target (stall, divergence, underflow).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

}  // namespace afrac
