#include "nlslab/error.hpp"

namespace nlslab {

GuardTripped::GuardTripped(double time, double fraction, double threshold)
    : std::runtime_error("boundary guard tripped at t=" + std::to_string(time) +
                         ": mass fraction beyond 0.9R is " +
                         std::to_string(fraction) + " > " +
                         std::to_string(threshold)),
      time_(time),
      fraction_(fraction) {}

SolverFailure::SolverFailure(double time, const std::string& what)
    : std::runtime_error("solver failure at t=" + std::to_string(time) + ": " +
                         what),
      time_(time) {}

}  // namespace nlslab
