#pragma once

#include <vector>

#include "qd/bloch.hpp"

namespace qd {

/// Two-outcome weak measurement O(+-) = a I +- b sx with
/// a = (sqrt(k) + sqrt(1-k))/2, b = (sqrt(k) - sqrt(1-k))/2.
/// Completeness: 2 (a^2 + b^2) = 1 for every k in [0, 1].
struct WeakMeasurement {
    double k;
    double a;
    double b;
};

WeakMeasurement weak_operators(double k);

struct WeakOutcome {
    BlochState state;
    double probability;
};

/// Applies O(+-) to a state: probability = 1/2 +- 2ab x, posterior from the
/// operator update. Pure states stay pure exactly.
WeakOutcome apply_weak(const BlochState& s, const WeakMeasurement& m, int outcome);

/// Discretization bridge to the continuous measurement:
/// k(dt) = 1/2 - sqrt(epsilon dt), valid while epsilon*dt < 1/4.
struct ContinuumSchedule {
    double epsilon;
    double dt;
    double k() const;
};

/// Strength-density matching the SME of rate gamma. The value 2*gamma makes
/// the one-step variance of x under apply_weak equal to the SME's
/// 8 gamma (1-x^2)^2 dt rate; the weak-measurement test suite re-fits this
/// constant empirically over a dt grid.
double epsilon_for(double gamma);

struct OutcomeBranch {
    double probability;  // joint probability of the outcome string
    double p1;           // posterior preparation probabilities
    double p2;
};

inline constexpr int kMaxTreeSteps = 25;

/// Exact joint distribution over all 2^n outcome strings of n repeated weak
/// measurements on the ensemble, with per-branch Bayes posteriors.
/// Accumulation in long double; branch probabilities sum to 1 within 1e-10.
std::vector<OutcomeBranch> enumerate_outcome_tree(const CodingEnsemble& e, double k,
                                                  int n_steps);

/// H(priors) - E[H(posterior)] over the exact outcome tree, in nats.
double weak_sequence_mi(const CodingEnsemble& e, double k, int n_steps);

}  // namespace qd
