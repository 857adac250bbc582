#include <doctest.h>

#include <cmath>

#include "qd/bloch.hpp"
#include "qd/errors.hpp"
#include "qd/numerics.hpp"
#include "qd/rng.hpp"
#include "qd/weak.hpp"

using namespace qd;

TEST_CASE("operator coefficients and completeness") {
    const WeakMeasurement half = weak_operators(0.5);
    CHECK(half.a == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(half.b == doctest::Approx(0.0).epsilon(1e-15));

    const WeakMeasurement proj = weak_operators(1.0);
    CHECK(proj.a == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(proj.b == doctest::Approx(0.5).epsilon(1e-15));

    const WeakMeasurement m9 = weak_operators(0.9);
    CHECK(m9.a == doctest::Approx(0.6324555).epsilon(1e-7));
    CHECK(m9.b == doctest::Approx(0.3162278).epsilon(1e-7));

    for (int i = 0; i <= 100; ++i) {
        const WeakMeasurement m = weak_operators(i / 100.0);
        CHECK(std::abs(2.0 * (m.a * m.a + m.b * m.b) - 1.0) <= 1e-14);
    }
    CHECK_THROWS_AS(weak_operators(-0.01), DomainError);
    CHECK_THROWS_AS(weak_operators(1.01), DomainError);
}

TEST_CASE("applying a weak measurement") {
    // sx eigenstate is a fixed point of the projective measurement
    const WeakOutcome eig = apply_weak({1, 0, 0}, weak_operators(1.0), +1);
    CHECK(eig.probability == doctest::Approx(1.0));
    CHECK(eig.state.x == doctest::Approx(1.0));

    // x = 0 gives symmetric outcomes
    for (double k : {0.2, 0.5, 0.8}) {
        const WeakOutcome p = apply_weak({0, 0, 1}, weak_operators(k), +1);
        const WeakOutcome m = apply_weak({0, 0, 1}, weak_operators(k), -1);
        CHECK(p.probability == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(m.probability == doctest::Approx(0.5).epsilon(1e-15));
    }

    const BlochState s{0.7071068, 0.0, 0.7071068};
    const WeakOutcome o = apply_weak(s, weak_operators(0.9), +1);
    CHECK(o.probability == doctest::Approx(0.7828427).epsilon(1e-7));

    // purity preserved for (exactly) pure inputs, any k and outcome
    const BlochState pure{std::sqrt(0.5), 0.0, std::sqrt(0.5)};
    for (double k : {0.1, 0.45, 0.73, 1.0}) {
        for (int sgn : {+1, -1}) {
            const WeakOutcome w = apply_weak(pure, weak_operators(k), sgn);
            CHECK(std::abs(w.state.norm() - 1.0) <= 1e-14);
        }
    }

    // probabilities of the two outcomes always sum to 1
    for (double x : {-0.9, -0.3, 0.0, 0.5, 1.0}) {
        const BlochState st{x, 0.0, std::sqrt(1.0 - x * x)};
        const WeakMeasurement m = weak_operators(0.37);
        CHECK(apply_weak(st, m, +1).probability + apply_weak(st, m, -1).probability ==
              doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("continuum schedule and strength calibration") {
    const double gamma = 1.7;
    CHECK(epsilon_for(gamma) == doctest::Approx(2.0 * gamma));
    const ContinuumSchedule bad{epsilon_for(gamma), 1.0};
    CHECK_THROWS_AS(bad.k(), DomainError);

    // one-step mean/variance of the posterior-probability increment match the
    // continuous filter: drift 0 (exactly), variance 8g (x1-xbar)^2 p1^2 dt
    const CodingEnsemble e = coding_states(M_PI / 4.0, 0.6);
    const double xbar = mixture(e).x;
    for (double dt : {1e-5, 1e-4, 1e-3}) {
        const ContinuumSchedule sched{epsilon_for(gamma), dt};
        const WeakMeasurement m = weak_operators(sched.k());
        double mean = 0.0, second = 0.0;
        for (int sgn : {+1, -1}) {
            const WeakOutcome o1 = apply_weak(e.rho1, m, sgn);
            const WeakOutcome o2 = apply_weak(e.rho2, m, sgn);
            const double q = e.p1 * o1.probability + e.p2 * o2.probability;
            const double dp = e.p1 * o1.probability / q - e.p1;
            mean += q * dp;
            second += q * dp * dp;
        }
        CHECK(std::abs(mean) <= 1e-15);
        const double expected = 8.0 * gamma * (e.rho1.x - xbar) * (e.rho1.x - xbar) *
                                e.p1 * e.p1 * dt;
        CHECK(second == doctest::Approx(expected).epsilon(20.0 * dt));
    }

    // the empirically fitted strength density is dt-independent: variance of
    // the one-step x increment over (1-x^2)^2 dt equals 8 gamma = 4 epsilon
    const double x = 0.3;
    const BlochState probe{x, 0.0, std::sqrt(1.0 - x * x)};
    for (double dt : {1e-5, 1e-4, 1e-3}) {
        const ContinuumSchedule sched{epsilon_for(gamma), dt};
        const WeakMeasurement m = weak_operators(sched.k());
        double mean = 0.0, second = 0.0;
        for (int sgn : {+1, -1}) {
            const WeakOutcome o = apply_weak(probe, m, sgn);
            mean += o.probability * (o.state.x - x);
            second += o.probability * (o.state.x - x) * (o.state.x - x);
        }
        CHECK(std::abs(mean) <= 1e-14);
        const double fitted = (second - mean * mean) /
                              ((1.0 - x * x) * (1.0 - x * x) * dt);
        CHECK(fitted / (8.0 * gamma) == doctest::Approx(1.0).epsilon(2e-2));
    }
}

TEST_CASE("outcome tree") {
    const CodingEnsemble e = coding_states(M_PI / 4.0);

    const auto trivial = enumerate_outcome_tree(e, 0.8, 0);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].probability == doctest::Approx(1.0));
    CHECK(trivial[0].p1 == doctest::Approx(0.5));

    // projective measurement on orthogonal states resolves in one step
    const auto proj = enumerate_outcome_tree(coding_states(M_PI / 2.0), 1.0, 1);
    REQUIRE(proj.size() == 2);
    for (const OutcomeBranch& b : proj) {
        CHECK(b.probability == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(std::max(b.p1, b.p2) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // branch probabilities sum to 1
    for (int n : {1, 4, 9}) {
        const auto tree = enumerate_outcome_tree(e, 0.8, n);
        CHECK(tree.size() == (std::size_t{1} << n));
        long double total = 0.0L;
        for (const OutcomeBranch& b : tree) total += b.probability;
        CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-10);
    }

    CHECK_THROWS_AS(enumerate_outcome_tree(e, 0.8, 26), ResourceError);
}

TEST_CASE("sequence mutual information") {
    const CodingEnsemble e = coding_states(M_PI / 4.0);
    CHECK(weak_sequence_mi(e, 0.8, 0) == doctest::Approx(0.0));
    CHECK(weak_sequence_mi(coding_states(M_PI / 2.0), 1.0, 1) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // nondecreasing in n, per-step gains nonincreasing, approaches the
    // optimal value from below
    const double m_opt = optimal_mutual_info(M_PI / 4.0);
    double prev = 0.0, prev_gain = 1e9;
    for (int n = 1; n <= 12; ++n) {
        const double m = weak_sequence_mi(e, 0.8, n);
        const double gain = m - prev;
        CHECK(gain >= -1e-12);
        CHECK(gain <= prev_gain + 1e-12);
        CHECK(m < m_opt);
        prev = m;
        prev_gain = gain;
    }
    CHECK(m_opt - prev < 0.01);  // n = 12, k = 0.8 sits within 0.01 nat of optimal

    // MC sampling of the same chain agrees with the exact tree
    const double mi_tree = weak_sequence_mi(e, 0.8, 10);
    const WeakMeasurement m = weak_operators(0.8);
    RunningStats h_stats;
    for (int s = 0; s < 4000; ++s) {
        NormalStream rng(2024, s);
        BlochState s1 = e.rho1, s2 = e.rho2;
        double p1 = 0.5;
        for (int step = 0; step < 10; ++step) {
            const WeakOutcome o1p = apply_weak(s1, m, +1);
            const WeakOutcome o2p = apply_weak(s2, m, +1);
            const double q = p1 * o1p.probability + (1.0 - p1) * o2p.probability;
            if (rng.next_uniform() < q) {
                p1 = p1 * o1p.probability / q;
                s1 = o1p.state;
                s2 = o2p.state;
            } else {
                const WeakOutcome o1m = apply_weak(s1, m, -1);
                const WeakOutcome o2m = apply_weak(s2, m, -1);
                p1 = p1 * o1m.probability / (1.0 - q);
                s1 = o1m.state;
                s2 = o2m.state;
            }
        }
        h_stats.add(binary_entropy(p1));
    }
    const double mi_mc = std::log(2.0) - h_stats.mean();
    CHECK(std::abs(mi_mc - mi_tree) <= 2.0 * h_stats.stderr_mean());
}
