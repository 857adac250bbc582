#pragma once

#include <stdexcept>
#include <string>

namespace qd {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature / search failed to reach its tolerance; message carries diagnostics.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrator step failure, tagged with the offending trajectory and time.
struct StepError : std::runtime_error {
    long trajectory;
    double time;
    StepError(const std::string& what, long traj, double t)
        : std::runtime_error(what + " (trajectory " + std::to_string(traj) +
                             ", t=" + std::to_string(t) + ")"),
          trajectory(traj), time(t) {}
};

}  // namespace qd
