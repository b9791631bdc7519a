#pragma once

#include <stdexcept>
#include <string>

namespace fraxonium {

/// Raised when a numerical routine cannot produce a trustworthy result
/// (non-convergence, non-finite input, norm drift, singular systems).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fraxonium
