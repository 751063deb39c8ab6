#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maser {

/// Malformed or schema-violating configuration input. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Physically inadmissible value (non-positive rate, zero detuning, ...).
/// CLI exit code 3.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical failure during integration. CLI exit code 4.
class BlowupError : public std::runtime_error {
public:
    BlowupError(std::size_t step, double max_abs)
        : std::runtime_error("field blow-up at step " + std::to_string(step) +
                             " (max |F| = " + std::to_string(max_abs) + ")"),
          step(step),
          max_abs(max_abs) {}

    std::size_t step;
    double max_abs;
};

}  // namespace maser
