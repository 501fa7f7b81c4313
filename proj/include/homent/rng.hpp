#ifndef HOMENT_RNG_HPP
#define HOMENT_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace homent {

/**
 * SplitMix64 finalizer. Used to turn (master seed, stream index) pairs into
 * well-separated engine seeds, so every parallel unit of work (sample chunk,
 * Markov chain, sweep row) owns an independent stream derived from one seed.
 */
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of stream `path...` below `master`; each level is mixed separately.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t p : path)
        s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

/**
 * Random stream: a std::mt19937_64 engine seeded through splitmix64.
 *
 * Conversions to reals and bounded integers are done here rather than with
 * the <random> distributions, whose output is implementation-defined; this
 * keeps emitted files identical across standard libraries.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound)
    {
        // Rejection on the top of the range keeps the result unbiased.
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace homent

#endif  // HOMENT_RNG_HPP
