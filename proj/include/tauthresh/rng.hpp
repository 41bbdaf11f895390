#pragma once

#include <cmath>
#include <cstdint>

namespace tauthresh {

// Counter-based generator (Philox 4x32-10). A stream is addressed by
// (seed, stream id) and every draw is a pure function of the 128-bit
// counter, so replicates can run on any number of threads in any order
// without changing the numbers they see.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint64_t next_u64() {
        if (block_pos_ == 2) {
            philox_block(counter_++);
            block_pos_ = 0;
        }
        return block_[block_pos_++];
    }

    // Uniform on (0, 1]; never returns 0 so log(u) is safe.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi) {
        std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(prod >> 32);
        return static_cast<std::uint32_t>(prod);
    }

    void philox_block(std::uint64_t ctr) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr >> 32);
        std::uint32_t c2 = stream_lo_;
        std::uint32_t c3 = stream_hi_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, hi1;
            std::uint32_t lo0 = static_cast<std::uint32_t>(mulhilo(0xD2511F53u, c0, hi0));
            std::uint32_t lo1 = static_cast<std::uint32_t>(mulhilo(0xCD9E8D57u, c2, hi1));
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        block_[0] = (static_cast<std::uint64_t>(c1) << 32) | c0;
        block_[1] = (static_cast<std::uint64_t>(c3) << 32) | c2;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t counter_ = 0;
    std::uint64_t block_[2] = {0, 0};
    int block_pos_ = 2;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace tauthresh
