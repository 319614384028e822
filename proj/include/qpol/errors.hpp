#ifndef QPOL_ERRORS_HPP
#define QPOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpol {

/// Base class for all qpol errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input: bad quantum numbers, states failing
/// their invariants, mismatched bases, inconsistent strategy requests.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure was asked to run outside its domain of validity
/// (e.g. the Gauss rotation construction near theta = pi).
class NumericalError : public Error {
public:
    using Error::Error;
};

class CutoffError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class BasisMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace qpol

#endif
