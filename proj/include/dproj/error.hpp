#pragma once

#include <stdexcept>
#include <string>

namespace dproj {

/// Caller violated an operation's precondition (bad input, mismatched scales,
/// malformed file). The CLI maps this to exit status 1.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internal invariant failed: a theorem that must hold on exact data was
/// violated, or a search that is guaranteed to succeed did not. Always a bug.
/// The CLI maps this to exit status 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline void ensure(bool cond, const std::string& what) {
  if (!cond) throw InvariantError(what);
}

}  // namespace dproj
