#pragma once

#include <gtest/gtest.h>

#include "hdk/error.hpp"

namespace hdk::testing {

template <class F>
ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kConsistency;
}

}  // namespace hdk::testing
