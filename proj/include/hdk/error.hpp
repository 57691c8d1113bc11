#pragma once

#include <stdexcept>
#include <string>

namespace hdk {

enum class ErrorCode {
  kDomain,       // argument outside its valid range
  kFormat,       // malformed input file or image shape
  kShape,        // size mismatch between maps or point sets
  kGeometry,     // camera outside room, self-intersection, occluded corner
  kDegenerate,   // coincident points, ray parallel to plane, duplicate longitude
  kOpenLayout,   // a ray hits no wall
  kConsistency,  // render trace does not belong to the given inputs
  kFitFailure,
  kSnapFailure,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace hdk
