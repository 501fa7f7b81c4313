#ifndef HOMENT_ERRORS_HPP
#define HOMENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace homent {

/// Malformed input: bad edge lists, invalid configs, out-of-range arguments.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or a whole estimate fell outside the numerically meaningful region.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// theta is not in the positive-definiteness domain of psi.
class DomainError : public NumericalError {
public:
    DomainError() : NumericalError("theta outside Theta-tilde") {}
    using NumericalError::NumericalError;
};

/// A bounded-retry loop (degree realization, acceptance window) gave up.
class RetryExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
    success = 0,
    input_error = 2,
    numerical_degeneracy = 3,
    retry_exhaustion = 4,
};

}  // namespace homent

#endif  // HOMENT_ERRORS_HPP
