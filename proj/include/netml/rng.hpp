#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace netml {

// 64-bit seed for every randomized step in the pipeline. Identical seeds on
// identical inputs must yield bit-identical results, so all random draws go
// through Rng below instead of <random> distributions (whose sequences are
// implementation-defined).
struct Seed {
    std::uint64_t value = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256** seeded via splitmix64. Fully specified, so streams are
// reproducible across compilers and platforms.
class Rng {
public:
    explicit Rng(Seed seed) : origin_(seed.value) {
        std::uint64_t sm = seed.value;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }
    explicit Rng(std::uint64_t seed) : Rng(Seed{seed}) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % n;
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Marsaglia's polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // Child stream decorrelated from this one; forking with the same tag
    // twice gives the same stream.
    Rng fork(std::uint64_t tag) const {
        std::uint64_t sm = origin_ ^ (0xD1B54A32D192ED03ULL * (tag + 1));
        return Rng(Seed{detail::splitmix64(sm)});
    }
    Rng fork(std::uint64_t a, std::uint64_t b) const { return fork(a).fork(b); }
    Rng fork(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
        return fork(a).fork(b).fork(c);
    }

    std::uint64_t origin() const { return origin_; }

private:
    std::uint64_t origin_;
    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace netml
