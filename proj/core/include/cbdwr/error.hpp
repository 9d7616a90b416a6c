#pragma once

#include <stdexcept>
#include <string>

namespace cbdwr {

/// Raised for contract violations and numerical failures (solver breakdown,
/// Newton non-convergence). The message carries the diagnostic.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace cbdwr
