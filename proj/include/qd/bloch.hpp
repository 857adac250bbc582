#pragma once

#include <span>

namespace qd {

/// A qubit state as a Bloch vector, rho = (I + x sx + y sy + z sz)/2.
/// All dynamics in this library stay in the x-z plane (y == 0); the y
/// component is kept so rotation conventions can be tested on full vectors.
struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    bool inside_ball(double tol = 1e-12) const;
    bool is_pure(double tol = 1e-12) const;
};

/// The symmetric coding pair: rho1/rho2 at angle +-theta from the z axis,
/// with prior probabilities p1, p2.
struct CodingEnsemble {
    double theta;
    BlochState rho1;
    BlochState rho2;
    double p1;
    double p2;
};

/// Builds the coding pair (sin t, 0, cos t), (-sin t, 0, cos t).
/// theta must lie in [0, pi/2]; priors default to 1/2 each.
CodingEnsemble coding_states(double theta, double p1 = 0.5);

/// -sum p_i ln p_i in nats, with 0 ln 0 = 0. Entries must be >= 0 and
/// sum to 1 within 1e-9.
double shannon_entropy(std::span<const double> p);

/// Binary entropy H(p, 1-p) in nats. No normalization check.
double binary_entropy(double p);

/// ln 2 + sum_{+-} [1/2 +- sin(theta)/2] ln[1/2 +- sin(theta)/2]:
/// the mutual information of the optimal projective measurement.
double optimal_mutual_info(double theta);

/// Rotation in the x-z plane: (x, z) -> (x cos phi - z sin phi,
/// x sin phi + z cos phi); y untouched.
BlochState rotate_xz(const BlochState& s, double phi);

/// Convex combination p1*rho1 + p2*rho2.
BlochState mixture(const CodingEnsemble& e);

}  // namespace qd
