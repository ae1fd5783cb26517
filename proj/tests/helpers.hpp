#pragma once

#include <functional>

#include "spanlab/error.hpp"

inline bool throws_kind(spanlab::ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
  } catch (const spanlab::Error& e) {
    return e.kind() == kind;
  }
  return false;
}
