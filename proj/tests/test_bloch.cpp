#include <doctest.h>

#include <cmath>
#include <vector>

#include "qd/bloch.hpp"
#include "qd/errors.hpp"

using namespace qd;

TEST_CASE("coding states geometry") {
    const CodingEnsemble e = coding_states(M_PI / 2.0);
    CHECK(e.rho1.x == doctest::Approx(1.0));
    CHECK(e.rho2.x == doctest::Approx(-1.0));
    CHECK(e.rho1.z == doctest::Approx(0.0).epsilon(1e-12));

    const CodingEnsemble id = coding_states(0.0);
    CHECK(id.rho1.x == 0.0);
    CHECK(id.rho1.z == 1.0);
    CHECK(id.rho2.x == 0.0);

    const CodingEnsemble q = coding_states(M_PI / 4.0);
    CHECK(q.rho1.x == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(q.rho1.z == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(q.rho1.is_pure());
    CHECK(q.rho2.is_pure());

    CHECK_THROWS_AS(coding_states(-0.1), DomainError);
    CHECK_THROWS_AS(coding_states(2.0), DomainError);
}

TEST_CASE("shannon entropy") {
    const std::vector<double> half{0.5, 0.5};
    CHECK(shannon_entropy(half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    const std::vector<double> pure{1.0, 0.0};
    CHECK(shannon_entropy(pure) == 0.0);
    // frozen from a 50-digit evaluation of -sum p ln p
    const std::vector<double> skew{0.8535534, 0.1464466};
    CHECK(shannon_entropy(skew) == doctest::Approx(0.41649551411800700).epsilon(1e-9));

    const std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS_AS(shannon_entropy(bad), DomainError);
    const std::vector<double> neg{-0.1, 1.1};
    CHECK_THROWS_AS(shannon_entropy(neg), DomainError);

    CHECK(shannon_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
          doctest::Approx(std::log(4.0)));
}

TEST_CASE("optimal mutual information") {
    CHECK(optimal_mutual_info(M_PI / 2.0) == std::log(2.0));  // exact
    CHECK(optimal_mutual_info(0.0) == doctest::Approx(0.0));
    // frozen from a 50-digit evaluation of the formula
    CHECK(optimal_mutual_info(M_PI / 4.0) ==
          doctest::Approx(0.27665164986025786).epsilon(1e-10));
    CHECK(optimal_mutual_info(M_PI / 8.0) ==
          doctest::Approx(0.075124260547180).epsilon(1e-10));

    // monotone nondecreasing on [0, pi/2]
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double m = optimal_mutual_info(i * M_PI / 100.0);
        CHECK(m >= prev - 1e-14);
        CHECK(m >= 0.0);
        CHECK(m <= std::log(2.0) + 1e-14);
        prev = m;
    }
}

TEST_CASE("rotations in the x-z plane") {
    const BlochState up{0.0, 0.0, 1.0};
    const BlochState r0 = rotate_xz(up, 0.0);
    CHECK(r0.x == 0.0);
    CHECK(r0.z == 1.0);

    const BlochState quarter = rotate_xz(up, M_PI / 2.0);
    CHECK(quarter.x == doctest::Approx(-1.0));
    CHECK(quarter.z == doctest::Approx(0.0).epsilon(1e-12));

    // composition = rotation by the sum
    const BlochState s{0.6, 0.0, 0.8};
    const BlochState ab = rotate_xz(rotate_xz(s, 0.3), 0.5);
    const BlochState sum = rotate_xz(s, 0.8);
    CHECK(ab.x == doctest::Approx(sum.x).epsilon(1e-14));
    CHECK(ab.z == doctest::Approx(sum.z).epsilon(1e-14));

    // norm preserved to 1e-14 per application
    BlochState t{0.28, 0.0, 0.96};
    for (int i = 0; i < 100; ++i) t = rotate_xz(t, 0.1 * i);
    CHECK(std::abs(t.norm() - 1.0) <= 100 * 1e-14);
}

TEST_CASE("mixture") {
    const CodingEnsemble e = coding_states(M_PI / 4.0);
    const BlochState m = mixture(e);
    CHECK(m.x == 0.0);  // exact cancellation by symmetry
    CHECK(m.z == doctest::Approx(0.7071068).epsilon(1e-7));

    const CodingEnsemble one = coding_states(M_PI / 4.0, 1.0);
    const BlochState m1 = mixture(one);
    CHECK(m1.x == doctest::Approx(one.rho1.x));
    CHECK(m1.z == doctest::Approx(one.rho1.z));

    const CodingEnsemble skew = coding_states(M_PI / 8.0, 0.75);
    const BlochState ms = mixture(skew);
    CHECK(ms.x == doctest::Approx(0.5 * 0.3826834).epsilon(1e-7));
    CHECK(ms.z == doctest::Approx(0.9238795).epsilon(1e-7));
}
