#pragma once

#include <stdexcept>
#include <string>

namespace concbounds {

/// An iterative or adaptive routine ran out of budget before reaching its
/// tolerance. Carries the iteration count and the last observed gap so the
/// caller can tell a tolerance problem from a parameter problem.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, long iterations, double last_gap)
      : std::runtime_error(what), iterations_(iterations), last_gap_(last_gap) {}

  long iterations() const noexcept { return iterations_; }
  double last_gap() const noexcept { return last_gap_; }

private:
  long iterations_;
  double last_gap_;
};

} // namespace concbounds
