#pragma once

#include <stdexcept>
#include <string>

namespace m0n {

/// Malformed user input: bad subsets, out-of-range parameters, unparsable files.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A request beyond a working bound of the implementation (e.g. Gram data for n > 7).
struct capability_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal cross-check failed (two evaluation routes disagree, M*Minv != I, ...).
struct verification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace m0n
