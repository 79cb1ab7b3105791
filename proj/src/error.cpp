#include "p3dc/error.hpp"

namespace p3dc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Format: return "format_error";
    case ErrorCode::Schema: return "schema_error";
    case ErrorCode::Data: return "data_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Precondition: return "precondition_error";
    case ErrorCode::Degenerate: return "degenerate_input";
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::Capacity: return "capacity_error";
    case ErrorCode::Config: return "config_error";
  }
  return "unknown_error";
}

}  // namespace p3dc
