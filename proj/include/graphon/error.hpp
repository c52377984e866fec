#ifndef GRAPHON_ERROR_HPP
#define GRAPHON_ERROR_HPP

#include <stdexcept>
#include <string>

namespace graphon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: asymmetric matrices, bad partitions, out-of-range values.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The input is well formed but the requested quantity is not defined or
/// not computable (disconnected graphon, convergence guard, overflow).
class DomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace graphon

#endif  // GRAPHON_ERROR_HPP
