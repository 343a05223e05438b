#pragma once

#include <stdexcept>
#include <string>

namespace entropyts {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Power iteration on a transition matrix did not settle to a single row.
class ReducibleChainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative fit failed (optimizer, EM collapse on every restart).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File or parse problems during ingestion.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace entropyts
