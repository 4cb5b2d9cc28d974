// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace srm {

// Domain violations (negative inverse argument, length mismatch, reused hub
// index) throw std::domain_error. The classes below cover the remaining
// failure kinds so callers can map them to distinct exit statuses.

/// A computation would exceed a hard size guard (factorial search, dense
/// materialization of a doubly exponential term).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sign or equality question could not be settled within the step cap.
class unresolved_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well formed but too small or otherwise unusable for the request.
class degenerate_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace srm
