#pragma once

#include <stdexcept>
#include <string>

namespace helix {

// Domain failure: bad inputs, violated preconditions, unusable data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment failure: a required external tool is missing or unusable.
// Kept distinct so callers can tell "this export is broken" apart from
// "this machine cannot build anything".
class ToolchainError : public Error {
 public:
  using Error::Error;
};

}  // namespace helix
