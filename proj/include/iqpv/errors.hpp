#pragma once

#include <stdexcept>
#include <string>

namespace iqpv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand lengths or shapes disagree.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// An argument is outside the domain of the operation.
class InvalidParameter : public Error {
   public:
    using Error::Error;
};

/// A computation would exceed a configured size cap.
class ResourceLimit : public Error {
   public:
    using Error::Error;
};

/// The noise-rate regression had no usable data points.
class FitFailure : public Error {
   public:
    using Error::Error;
};

/// Malformed input file. The message carries the offending key or position.
class ParseError : public Error {
   public:
    using Error::Error;
};

/// Numerical result violated an internal invariant (e.g. large negative probability).
class ConsistencyError : public Error {
   public:
    using Error::Error;
};

}  // namespace iqpv
