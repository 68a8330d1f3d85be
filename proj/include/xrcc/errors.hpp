#pragma once

#include <stdexcept>
#include <string>

namespace xrcc {

/// Bad sizes, ranges or shapes passed by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Payload length mismatches and unknown file ids.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters the implemented schemes do not cover (non-integer t, grouping
/// that does not divide evenly, infeasible cache sizes).
class UnsupportedParameter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user could not rebuild its file; the placement and schedule disagree.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy from an entry that the user can neither cancel nor wants.
class ResidualInterference : public DecodeError {
 public:
  using DecodeError::DecodeError;
};

class BeamformingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xrcc
