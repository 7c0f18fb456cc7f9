#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

/// Mass reached the outer shell of the computational ball; results past this
/// time would be contaminated by the truncation.
class GuardTripped : public std::runtime_error {
 public:
  GuardTripped(double time, double fraction, double threshold);
  double time() const noexcept { return time_; }
  double fraction() const noexcept { return fraction_; }

 private:
  double time_;
  double fraction_;
};

/// A time integrator produced non-finite values, or an iteration diverged.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(double time, const std::string& what);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace nlslab
