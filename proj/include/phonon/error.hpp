#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phonon {

enum class ErrorCode {
  not_hermitian,
  singular_system,
  dimension_mismatch,
  degenerate_denominator,
  negative_denominator,
  non_convergence,
  non_positive,
  step_size_underflow,
  truncation_explosion,
  insufficient_occupation,
  invalid_argument,
  io_failure,
  unsupported_shape,
  usage_error,
};

/// Symbolic, snake_case name of an error code; used verbatim in CSV error cells.
std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phonon
