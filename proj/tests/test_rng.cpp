#include <doctest.h>

#include <cmath>
#include <vector>

#include "qd/numerics.hpp"
#include "qd/rng.hpp"

using namespace qd;

TEST_CASE("philox4x64-10 reference vectors") {
    // frozen against an independent implementation (numpy.random.Philox;
    // numpy pre-increments its counter, so its block n appears at ctr n+1)
    using B = Philox4x64::Block;
    B b = Philox4x64::bijection({1, 0, 0, 0}, {0, 0});
    CHECK(b[0] == 0x02f4ba6408e4d89bull);
    CHECK(b[1] == 0x3dd62b0b9ca8c5b2ull);
    CHECK(b[2] == 0x1c8667a55d902e79ull);
    CHECK(b[3] == 0x907d7a052fd5b4dcull);

    b = Philox4x64::bijection({2, 0, 0, 0}, {0, 0});
    CHECK(b[0] == 0x809bf322883987c3ull);
    CHECK(b[3] == 0xfc6ed66767a457bcull);

    b = Philox4x64::bijection({0x243f6a8885a308d3ull + 1, 0x13198a2e03707344ull,
                               0x452821e638d01377ull, 0xbe5466cf34e90c6cull},
                              {0xa4093822299f31d0ull, 0x82efa98ec4e6c894ull});
    CHECK(b[0] == 0x16de54f3551f6172ull);
    CHECK(b[1] == 0xe86fee6387f53e54ull);
    CHECK(b[2] == 0x9881dc5257ad6d11ull);
    CHECK(b[3] == 0x7d7c0011c25e8782ull);

    b = Philox4x64::bijection({2, 2, 3, 4}, {42, 7});
    CHECK(b[0] == 0x0c1a6ad67ab1ff2aull);
    CHECK(b[3] == 0x589d7f3c534e5e31ull);
}

TEST_CASE("stream determinism and independence") {
    NormalStream a(123, 5), b(123, 5);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    // different stream ids decorrelate
    NormalStream c(123, 6);
    RunningStats prod;
    NormalStream a2(123, 5);
    for (int i = 0; i < 20000; ++i) prod.add(a2.next() * c.next());
    CHECK(std::abs(prod.mean()) <= 4.0 * prod.stderr_mean() + 1e-3);
}

TEST_CASE("normal moments") {
    NormalStream g(7, 0);
    RunningStats s;
    double m3 = 0.0, m4 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = g.next();
        s.add(x);
        m3 += x * x * x;
        m4 += x * x * x * x;
    }
    m3 /= n;
    m4 /= n;
    CHECK(std::abs(s.mean()) <= 0.01);
    CHECK(s.variance() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(m3) <= 0.05);
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}
