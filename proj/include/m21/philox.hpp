// SPDX-License-Identifier: Apache-2.0
//
// Philox4x32-10 counter-based generator.  Every output is a pure function of
// (seed, counter), so Monte-Carlo shards can address disjoint counter ranges
// and reproduce results independently of worker count.

#ifndef M21_PHILOX_HPP
#define M21_PHILOX_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace m21 {

class Philox4x32 {
   public:
    explicit Philox4x32(std::uint64_t seed)
        : key0_(static_cast<std::uint32_t>(seed)), key1_(static_cast<std::uint32_t>(seed >> 32)) {}

    std::array<std::uint32_t, 4> block(std::uint64_t counter) const {
        std::uint32_t c0 = static_cast<std::uint32_t>(counter);
        std::uint32_t c1 = static_cast<std::uint32_t>(counter >> 32);
        std::uint32_t c2 = 0, c3 = 0;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c0;
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c2;
            const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
            const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
            const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        return {c0, c1, c2, c3};
    }

    /// Two uniform doubles in [0,1) from one block.
    std::array<double, 2> uniforms(std::uint64_t counter) const {
        const auto b = block(counter);
        const std::uint64_t u0 = (std::uint64_t{b[0]} << 32) | b[1];
        const std::uint64_t u1 = (std::uint64_t{b[2]} << 32) | b[3];
        constexpr double scale = 0x1.0p-53;
        return {static_cast<double>(u0 >> 11) * scale, static_cast<double>(u1 >> 11) * scale};
    }

   private:
    std::uint32_t key0_;
    std::uint32_t key1_;
};

/// Counter-addressable stream of standard normals (Box-Muller over Philox
/// blocks): normal(n) is a pure function of (seed, n).
class NormalStream {
   public:
    explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

    double operator()(std::uint64_t index) const {
        const auto u = gen_.uniforms(index >> 1);
        const double r = std::sqrt(-2.0 * std::log(1.0 - u[0]));
        const double theta = 2.0 * std::numbers::pi * u[1];
        return (index & 1) ? r * std::sin(theta) : r * std::cos(theta);
    }

   private:
    Philox4x32 gen_;
};

/// Sequential convenience wrapper for test data generation.
class SeededRng {
   public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        const std::uint64_t i = next_++;
        return gen_.uniforms(i >> 1)[i & 1];
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Log-uniform over [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) { return lo * std::exp(uniform() * std::log(hi / lo)); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(uniform() * (hi - lo + 1));
    }

   private:
    Philox4x32 gen_;
    std::uint64_t next_ = 0;
};

}  // namespace m21

#endif
