#pragma once

#include <stdexcept>
#include <string>

namespace rsl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A nearest-point projection has more than one minimizer.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// A configured enumeration budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An iterative oracle failed to settle.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

/// A serialized record is missing a field or has the wrong shape.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Something that is mathematically impossible happened; the data structures
/// are inconsistent.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsl
