#pragma once

#include <stdexcept>
#include <string>

namespace smoothlab {

/// Bad input: dimension mismatch, out-of-range parameter, overlapping regions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A level-set query asked for more mass than the noise model can place
/// inside the ball at any offset. Callers treat the partition as vanished.
class InfeasibleLevel : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested evaluation path does not exist for this input
/// (exact mode on an intractable classifier, certificate for a non-Gaussian family).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace smoothlab
