#ifndef MSFORGE_ERRORS_HPP
#define MSFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace msforge {

// Bad input: malformed curve spec, out-of-range parameter, invalid config.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure: quadrature did not converge, bracket not found,
// branch ambiguity during continuation.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace msforge

#endif
