#pragma once

#include <stdexcept>
#include <string>

namespace mgids {

// Raised when an exhaustive enumeration would exceed its configured guard.
class EnumerationTooLarge : public std::runtime_error {
 public:
  explicit EnumerationTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an observed trajectory has zero likelihood under every
// candidate environment of a finite-support belief.
class DegeneratePosterior : public std::runtime_error {
 public:
  explicit DegeneratePosterior(const std::string& what) : std::runtime_error(what) {}
};

// Raised by equilibrium solvers that fail to reach tolerance within their
// iteration budget; carries the best deviation gap found.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double best_gap)
      : std::runtime_error(what), best_gap_(best_gap) {}
  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

}  // namespace mgids
