#ifndef SLOWLIGHT_ERRORS_HPP
#define SLOWLIGHT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slowlight {

// Runtime numerical failure: integrator breakdown, quadrature
// non-convergence, poles hit during evaluation. The CLI maps this
// family to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid scenario/configuration input. Exit code 2 in the CLI.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace slowlight

#endif
