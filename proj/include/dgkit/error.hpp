#pragma once

#include <stdexcept>
#include <string>

namespace dgkit {

enum class ErrorCode {
  invalid_argument = 1,
  invalid_potential,
  quadrature_failure,
  integration_failure,
  admissibility_violation,
  out_of_tube,
  invalid_center,
  schedule_error,
  io_error,
  config_error,
  internal_error
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace dgkit
