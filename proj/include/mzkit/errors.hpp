#pragma once

#include <stdexcept>
#include <string>

namespace mzkit {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition on plain inputs.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The grid cannot resolve the requested subspace.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient basis; carries the offending eigenvalue.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

/// A numerical procedure failed (barrier step, LP pivoting, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A stated hypothesis does not hold for the given input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported experiment configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A serialized document has an unknown schema or version.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace mzkit
