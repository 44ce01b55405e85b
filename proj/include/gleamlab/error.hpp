#pragma once

#include <stdexcept>
#include <string>

namespace gleamlab {

// Malformed input: bad file syntax, invalid diagram, link instead of knot.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A well-formed request that cannot be evaluated (limits, unsupported
// invariant for the input, inconsistent intermediate results).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gleamlab
