#pragma once

#include <stdexcept>
#include <string>

namespace bosegas {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An input violates a documented precondition.
struct PreconditionError : Error {
  using Error::Error;
};

/// A numerical procedure failed to converge or produced non-finite values.
struct NumericError : Error {
  using Error::Error;
};

/// A configuration file or command line is malformed.
struct ConfigError : Error {
  using Error::Error;
};

/// Reading or writing a file failed.
struct IoError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace bosegas
