#include "qd/bloch.hpp"

#include <cmath>

#include "qd/errors.hpp"

namespace qd {

double BlochState::norm() const { return std::sqrt(x * x + y * y + z * z); }

bool BlochState::inside_ball(double tol) const {
    return x * x + y * y + z * z <= 1.0 + tol;
}

bool BlochState::is_pure(double tol) const { return std::abs(norm() - 1.0) <= tol; }

CodingEnsemble coding_states(double theta, double p1) {
    if (!(theta >= 0.0 && theta <= M_PI / 2.0))
        throw DomainError("coding_states: theta outside [0, pi/2]");
    if (!(p1 >= 0.0 && p1 <= 1.0))
        throw DomainError("coding_states: p1 outside [0, 1]");
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return CodingEnsemble{theta, {s, 0.0, c}, {-s, 0.0, c}, p1, 1.0 - p1};
}

double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    double h = 0.0;
    for (double pi : p) {
        if (pi < 0.0) throw DomainError("shannon_entropy: negative probability");
        sum += pi;
        if (pi > 0.0) h -= pi * std::log(pi);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw DomainError("shannon_entropy: probabilities do not sum to 1");
    return h;
}

double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    const double q = 1.0 - p;
    if (q > 0.0) h -= q * std::log(q);
    return h;
}

double optimal_mutual_info(double theta) {
    if (!(theta >= 0.0 && theta <= M_PI / 2.0))
        throw DomainError("optimal_mutual_info: theta outside [0, pi/2]");
    const double s = std::sin(theta);
    return std::log(2.0) - binary_entropy(0.5 * (1.0 + s));
}

BlochState rotate_xz(const BlochState& s, double phi) {
    const double c = std::cos(phi);
    const double sn = std::sin(phi);
    return BlochState{s.x * c - s.z * sn, s.y, s.x * sn + s.z * c};
}

BlochState mixture(const CodingEnsemble& e) {
    return BlochState{e.p1 * e.rho1.x + e.p2 * e.rho2.x,
                      e.p1 * e.rho1.y + e.p2 * e.rho2.y,
                      e.p1 * e.rho1.z + e.p2 * e.rho2.z};
}

}  // namespace qd
