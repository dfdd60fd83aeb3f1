#include "dgkit/error.hpp"

namespace dgkit {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_potential: return "invalid_potential";
    case ErrorCode::quadrature_failure: return "quadrature_failure";
    case ErrorCode::integration_failure: return "integration_failure";
    case ErrorCode::admissibility_violation: return "admissibility_violation";
    case ErrorCode::out_of_tube: return "out_of_tube";
    case ErrorCode::invalid_center: return "invalid_center";
    case ErrorCode::schedule_error: return "schedule_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::config_error: return "config_error";
    case ErrorCode::internal_error: return "internal_error";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace dgkit
