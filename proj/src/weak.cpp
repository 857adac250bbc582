#include "qd/weak.hpp"

#include <cmath>

#include "qd/errors.hpp"

namespace qd {

WeakMeasurement weak_operators(double k) {
    if (!(k >= 0.0 && k <= 1.0)) throw DomainError("weak_operators: k outside [0, 1]");
    const double rk = std::sqrt(k);
    const double rq = std::sqrt(1.0 - k);
    return WeakMeasurement{k, 0.5 * (rk + rq), 0.5 * (rk - rq)};
}

WeakOutcome apply_weak(const BlochState& s, const WeakMeasurement& m, int outcome) {
    const double sgn = outcome >= 0 ? 1.0 : -1.0;
    const double twoab = 2.0 * m.a * m.b;
    const double asq_bsq = m.a * m.a + m.b * m.b;  // = 1/2 by completeness
    const double prob = asq_bsq + sgn * twoab * s.x;
    // O rho O / prob in Bloch components; a^2 - b^2 = sqrt(k(1-k)).
    const double amb = m.a * m.a - m.b * m.b;
    BlochState out{(sgn * twoab + asq_bsq * s.x) / prob, amb * s.y / prob,
                   amb * s.z / prob};
    return WeakOutcome{out, prob};
}

double ContinuumSchedule::k() const {
    if (!(epsilon * dt < 0.25))
        throw DomainError("ContinuumSchedule: epsilon*dt must be < 1/4");
    return 0.5 - std::sqrt(epsilon * dt);
}

double epsilon_for(double gamma) { return 2.0 * gamma; }

namespace {

struct TreeFrame {
    BlochState s1, s2;
    long double p1, p2;
    long double prob;
    int depth;
};

}  // namespace

std::vector<OutcomeBranch> enumerate_outcome_tree(const CodingEnsemble& e, double k,
                                                  int n_steps) {
    if (n_steps < 0) throw DomainError("enumerate_outcome_tree: negative n_steps");
    if (n_steps > kMaxTreeSteps)
        throw ResourceError("enumerate_outcome_tree: n_steps > 25 (2^n branches)");
    const WeakMeasurement m = weak_operators(k);

    std::vector<OutcomeBranch> out;
    out.reserve(std::size_t{1} << n_steps);
    std::vector<TreeFrame> stack;
    stack.push_back(TreeFrame{e.rho1, e.rho2, e.p1, e.p2, 1.0L, 0});
    while (!stack.empty()) {
        TreeFrame f = stack.back();
        stack.pop_back();
        if (f.depth == n_steps) {
            out.push_back(OutcomeBranch{static_cast<double>(f.prob),
                                        static_cast<double>(f.p1),
                                        static_cast<double>(f.p2)});
            continue;
        }
        for (int sgn : {+1, -1}) {
            const WeakOutcome o1 = apply_weak(f.s1, m, sgn);
            const WeakOutcome o2 = apply_weak(f.s2, m, sgn);
            const long double q =
                f.p1 * (long double)o1.probability + f.p2 * (long double)o2.probability;
            if (q <= 0.0L) continue;
            stack.push_back(TreeFrame{o1.state, o2.state,
                                      f.p1 * (long double)o1.probability / q,
                                      f.p2 * (long double)o2.probability / q,
                                      f.prob * q, f.depth + 1});
        }
    }
    return out;
}

double weak_sequence_mi(const CodingEnsemble& e, double k, int n_steps) {
    if (n_steps < 0) throw DomainError("weak_sequence_mi: negative n_steps");
    if (n_steps > kMaxTreeSteps)
        throw ResourceError("weak_sequence_mi: n_steps > 25 (2^n branches)");
    const WeakMeasurement m = weak_operators(k);
    const long double h0 = -(long double)(e.p1 > 0 ? e.p1 * std::log(e.p1) : 0.0) -
                           (long double)(e.p2 > 0 ? e.p2 * std::log(e.p2) : 0.0);

    long double expected_h = 0.0L;
    std::vector<TreeFrame> stack;
    stack.push_back(TreeFrame{e.rho1, e.rho2, e.p1, e.p2, 1.0L, 0});
    while (!stack.empty()) {
        TreeFrame f = stack.back();
        stack.pop_back();
        if (f.depth == n_steps) {
            long double h = 0.0L;
            if (f.p1 > 0.0L) h -= f.p1 * std::log((double)f.p1);
            if (f.p2 > 0.0L) h -= f.p2 * std::log((double)f.p2);
            expected_h += f.prob * h;
            continue;
        }
        for (int sgn : {+1, -1}) {
            const WeakOutcome o1 = apply_weak(f.s1, m, sgn);
            const WeakOutcome o2 = apply_weak(f.s2, m, sgn);
            const long double q =
                f.p1 * (long double)o1.probability + f.p2 * (long double)o2.probability;
            if (q <= 0.0L) continue;
            stack.push_back(TreeFrame{o1.state, o2.state,
                                      f.p1 * (long double)o1.probability / q,
                                      f.p2 * (long double)o2.probability / q,
                                      f.prob * q, f.depth + 1});
        }
    }
    return static_cast<double>(h0 - expected_h);
}

}  // namespace qd
