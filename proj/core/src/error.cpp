#include "hktaylor/error.hpp"

namespace hktaylor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_interval: return "invalid-interval";
    case ErrorCode::invalid_point: return "invalid-point";
    case ErrorCode::invalid_degree: return "invalid-degree";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::evaluation_failure: return "evaluation-failure";
    case ErrorCode::unsorted_grid: return "unsorted-grid";
    case ErrorCode::unbounded_sample: return "unbounded-sample";
    case ErrorCode::primitive_not_anchored: return "primitive-not-anchored";
    case ErrorCode::derivative_unavailable_at_base: return "derivative-missing-at-base";
    case ErrorCode::derivative_unavailable_at_x0: return "derivative-missing-at-x0";
    case ErrorCode::order_unavailable: return "order-unavailable";
    case ErrorCode::regularity_precondition: return "regularity-precondition";
    case ErrorCode::conjugate_mismatch: return "conjugate-mismatch";
    case ErrorCode::unknown_function: return "unknown-function";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::output_unwritable: return "output-unwritable";
  }
  return "unknown";
}

}  // namespace hktaylor
