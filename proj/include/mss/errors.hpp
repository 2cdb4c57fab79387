#pragma once

#include <stdexcept>

namespace mss {

// computation failed for numerical reasons: degenerate geometry, non-finite
// values, a certification inequality that cannot hold
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// the mesh is too coarse for the request (or the request would blow the memory
// budget): integer rounding outside tolerance, margins unattainable, etc.
struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mss
