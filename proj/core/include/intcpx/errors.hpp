#pragma once

#include <stdexcept>
#include <string>

namespace intcpx {

/// A configured resource cap (table memory, scan depth, value range) would be
/// exceeded.  The message names the cap.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stability verdict needed by the computation is UnknownAtHorizon and the
/// caller asked for the strict policy.
class indeterminate_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace intcpx
