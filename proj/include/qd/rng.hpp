#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qd {

// Philox4x64-10 counter-based generator (Salmon et al., SC 2011), same
// constants and round structure as Random123/NumPy. Output for a given
// (key, counter) is a pure function, so streams can be replayed and
// distributed over workers in any order.
class Philox4x64 {
  public:
    using Block = std::array<std::uint64_t, 4>;

    Philox4x64(std::uint64_t key0, std::uint64_t key1, Block counter = {0, 0, 0, 0})
        : key_{key0, key1}, ctr_(counter) {}

    // Generates the block at the current counter, then advances it.
    Block next_block() {
        Block out = bijection(ctr_, key_);
        increment();
        return out;
    }

    static Block bijection(Block ctr, std::array<std::uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            ctr = single_round(ctr, key);
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

  private:
    static constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ull;
    static constexpr std::uint64_t kMult1 = 0xCA5A826395121157ull;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

    static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                        std::uint64_t& lo) {
        const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    static Block single_round(const Block& c, const std::array<std::uint64_t, 2>& k) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kMult0, c[0], hi0, lo0);
        mulhilo(kMult1, c[2], hi1, lo1);
        return Block{hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    void increment() {
        if (++ctr_[0] != 0) return;
        if (++ctr_[1] != 0) return;
        if (++ctr_[2] != 0) return;
        ++ctr_[3];
    }

    std::array<std::uint64_t, 2> key_;
    Block ctr_;
};

// Stream of standard normals derived from (seed, stream). Trajectory i of a
// run seeded with s uses NormalStream(s, i); results are independent of how
// trajectories are scheduled across workers.
class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : gen_(seed, stream) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto blk = gen_.next_block();
        const double u1 = to_open_unit(blk[0]);
        const double u2 = to_unit(blk[1]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double next_uniform() {  // in [0, 1)
        const auto blk = gen_.next_block();
        return to_unit(blk[0]);
    }

  private:
    static double to_unit(std::uint64_t x) {  // [0, 1)
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }
    static double to_open_unit(std::uint64_t x) {  // (0, 1)
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

    Philox4x64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qd
