#include "hdk/error.hpp"

namespace hdk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kGeometry: return "geometry error";
    case ErrorCode::kDegenerate: return "degenerate input";
    case ErrorCode::kOpenLayout: return "open layout";
    case ErrorCode::kConsistency: return "consistency error";
    case ErrorCode::kFitFailure: return "fit failure";
    case ErrorCode::kSnapFailure: return "snap failure";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace hdk
