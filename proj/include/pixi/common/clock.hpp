#pragma once

#include <chrono>
#include <cstdint>

namespace pixi {

// Milliseconds since the Unix epoch. All persisted timestamps use this unit.
using Millis = std::int64_t;

inline Millis now_millis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace pixi
