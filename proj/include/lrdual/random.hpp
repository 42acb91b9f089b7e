#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lrdual {

/**
 * Counter-based random numbers: every draw is a pure function of
 * (seed, stream, step, lane), built from chained SplitMix64 finalizers.
 * No state is carried between draws, so serial and parallel callers see
 * identical values for identical keys.
 */
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t step, std::uint64_t lane) const noexcept {
        std::uint64_t h = mix(seed_);
        h = mix(h ^ stream);
        h = mix(h ^ step);
        return mix(h ^ lane);
    }

    /// Uniform in the open interval (0, 1).
    double uniform(std::uint64_t stream, std::uint64_t step, std::uint64_t lane) const noexcept {
        return (static_cast<double>(bits(stream, step, lane) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on lanes (2*lane, 2*lane+1).
    double normal(std::uint64_t stream, std::uint64_t step, std::uint64_t lane) const noexcept {
        const double u1 = uniform(stream, step, 2 * lane);
        const double u2 = uniform(stream, step, 2 * lane + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Derives an independent seed, e.g. one per sweep cell.
    static constexpr std::uint64_t derive(std::uint64_t base_seed, std::uint64_t index) noexcept {
        return mix(mix(base_seed) ^ (index + 0x632be59bd9b4e019ULL));
    }

private:
    std::uint64_t seed_;
};

}  // namespace lrdual
