#pragma once

// Portable pseudo-random numbers. std::mt19937_64 is portable but the std
// distributions are not, so everything random in this project draws from
// Rng below and its own helpers. Traces are therefore identical across
// compilers and platforms for the same seed.
//
//   generator : xoshiro256** (Blackman & Vigna, 2018)
//   seeding   : the four state words are successive SplitMix64 outputs of the seed
//   sub-seeds : derive_seed(seed, tag) = splitmix64(seed ^ splitmix64(tag))
//   uniform01 : (next() >> 11) * 2^-53
//   below(n)  : Lemire's nearly-divisionless rejection on 64-bit products

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace gwsep {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept
{
    return splitmix64(seed ^ splitmix64(tag));
}

/// Sub-seed tags. Fixed values: changing one changes every trace.
namespace seed_tag {
inline constexpr std::uint64_t learner = 1;
inline constexpr std::uint64_t stream = 2;
inline constexpr std::uint64_t sampling = 3;
inline constexpr std::uint64_t shuffle = 4;
}  // namespace seed_tag

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept
    {
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::array<std::uint64_t, 4> state() const noexcept { return s_; }
    void set_state(const std::array<std::uint64_t, 4>& s) noexcept { s_ = s; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

/// Fisher-Yates with Rng::below, so the permutation is platform independent.
template <typename T>
void shuffle(std::span<T> items, Rng& rng)
{
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

}  // namespace gwsep
