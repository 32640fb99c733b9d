#pragma once

#include <stdexcept>
#include <string>

namespace critsweep {

// Invalid argument or scenario parameter (bad interval, k <= 0, unknown preset).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// 2 + a + b <= 0: the time reparametrization does not reach the critical point.
class SingularParameters : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// Special-function argument outside the supported real domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Step-size underflow, conservation-law violation or non-finite values.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No wavenumbers satisfy both the frozen and the initially-adiabatic bound.
class EmptyWindow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace critsweep
