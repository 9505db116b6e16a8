#pragma once

#include <stdexcept>
#include <string>

namespace flsarb {

// Bad argument or configuration supplied by the caller.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The normal equations at the current step do not determine the
// coefficients (reciprocal condition number below the singular threshold).
// Recoverable: re-initialize with a proper prior and replay.
class Underdetermined : public std::runtime_error {
public:
    Underdetermined(const std::string& what, double rcond)
        : std::runtime_error(what), rcond_(rcond) {}
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

// Malformed or inconsistent input data (CSV contents, prices, alignment).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flsarb
