#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qd/bloch.hpp"
#include "qd/rng.hpp"

namespace qd {

struct SimConfig {
    double gamma = 1.0;
    double dt = 1e-4;       // default 1e-4 / gamma when gamma != 1
    double t_max = 1.0;
    double theta0 = 0.0;
    bool feedback = false;
    std::uint64_t seed = 0;
    int n_traj = 1;
    double p1_0 = 0.5;      // prior of coding state 1

    void validate() const;  // throws DomainError on bad parameters
};

/// Joint instantaneous state of one noise realization. rho is maintained as
/// the exact mixture p1 rho1 + p2 rho2; the per-step agreement between the
/// directly-integrated d(rho) and the mixture of the coupled increments is
/// checked separately (see mixture_divergence_step).
struct TrajectoryState {
    double t = 0.0;
    BlochState rho;
    BlochState rho1;
    BlochState rho2;
    double p1 = 0.5;
    double p2 = 0.5;
    double y = 0.0;  // accumulated record
};

struct BlochIncrement {
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
};

/// Bloch form of the measurement master equation for the monitored state:
/// dx = sqrt(8g) (1 - x^2) dW,
/// dy = -4g y dt - sqrt(8g) x y dW,
/// dz = -4g z dt - sqrt(8g) x z dW.
BlochIncrement sme_increment(const BlochState& rho, double dW, double dt, double gamma);

/// dy = <sx> dt + dW / sqrt(8 gamma).
double record_increment(const BlochState& rho, double dW, double dt, double gamma);

/// Coding-state update driven by the common record: the sme_increment
/// evaluated with the innovation dW_i = dW - sqrt(8g) (x_i - xbar) dt.
BlochIncrement coding_state_increment(const BlochState& rho_i, const BlochState& rho,
                                      double dW, double dt, double gamma);

/// dP_i = sqrt(8g) (x_i - xbar) P_i dW.
double bayes_increment(double p_i, const BlochState& rho_i, const BlochState& rho,
                       double dW, double gamma);

/// Rotation angle that restores the symmetric configuration (z1 = z2 = z,
/// x1 = -x2 = x) after one measurement step:
///   phi = sqrt(8g) z dW + 8g z x (p1 - p2) dt.
/// This is 8 gamma z(t) dy. Both restoration conditions fix the noise
/// coefficient to sqrt(8g) z; the z factor is required for the post-rotation
/// symmetry to hold to O(dt^{3/2}).
double feedback_angle(double x, double z, double p1, double p2, double dW, double dt,
                      double gamma);

/// sigma_z coefficient 8 gamma (y_rate + (z - 1) xbar) of the feedback
/// Hamiltonian, exposed for inspection/logging; the simulator applies the
/// rotation by phi directly.
double feedback_hamiltonian_coeff(double y_rate, double z, double x_bar, double gamma);

/// Sign with which feedback_angle is passed to rotate_xz, resolved once by a
/// self-test that checks which sign restores the coding-state symmetry.
/// Throws if neither does.
double feedback_rotation_sign();

/// Euler-Maruyama integration of one trajectory; returns the state series
/// including t = 0. Noise stream is derived from (config.seed, traj_index).
std::vector<TrajectoryState> simulate(const SimConfig& config,
                                      std::uint64_t traj_index = 0);

/// Terminal p1 of n_traj independent trajectories, evaluated in parallel.
/// Slot i is produced by stream (seed, i), so the result is independent of
/// the worker count.
std::vector<double> sample_terminal_p1(const SimConfig& config);

/// p1 snapshots at the given times (sorted ascending) for every trajectory;
/// row i holds trajectory i.
std::vector<std::vector<double>> sample_p1_at(const SimConfig& config,
                                              const std::vector<double>& times);

/// One-step divergence between the directly integrated rho increment and the
/// mixture of the coupled (rho_i, P_i) increments, |.|_inf over components.
/// Scales linearly with dt; used by the validation suite's convergence check.
double mixture_divergence_step(const TrajectoryState& s, double dW, double dt,
                               double gamma);

}  // namespace qd
