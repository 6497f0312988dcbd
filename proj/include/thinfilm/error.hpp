#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

enum class ErrorKind {
  invalid_argument,
  non_finite_integrand,
  indefinite_denominator,
  diverged_coefficient,
  degenerate_exponent,
  zero_field,
  no_sign_change,
  hypothesis_violated,
  io,
  config,
};

// Single exception type for the library; the kind lets callers branch
// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, const std::string& what,
                    ErrorKind kind = ErrorKind::invalid_argument) {
  if (!condition) throw Error(kind, what);
}

}  // namespace thinfilm
