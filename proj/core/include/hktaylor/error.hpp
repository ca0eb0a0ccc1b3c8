#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hktaylor {

/// Machine-readable failure categories shared by every module.
enum class ErrorCode {
  invalid_interval,
  invalid_point,
  invalid_degree,
  invalid_params,
  non_convergence,
  evaluation_failure,
  unsorted_grid,
  unbounded_sample,
  primitive_not_anchored,
  derivative_unavailable_at_base,
  derivative_unavailable_at_x0,
  order_unavailable,
  regularity_precondition,
  conjugate_mismatch,
  unknown_function,
  parse_error,
  config_invalid,
  output_unwritable,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hktaylor
