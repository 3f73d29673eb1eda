#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgabor {

enum class ErrorCode {
  metric_degenerate,
  chart_exit,
  missing_parameter,
  reeb_degenerate,
  budget_exceeded,
  iteration_limit,
  window_degenerate,
  shape_mismatch,
  degenerate_constraint,
  invalid_argument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Upper bound on quadrature nodes, lattice points and similar work counts.
inline constexpr double kDefaultBudget = 1e7;

}  // namespace cgabor
