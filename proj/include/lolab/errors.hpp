#pragma once

#include <stdexcept>
#include <string>

namespace lolab {

// Malformed configuration, bad parameters, dimension mismatches.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size limit (enumeration depth, distinct atoms) was hit.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal cross-check disagreed with a computed result.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lolab
