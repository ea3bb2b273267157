#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace bergman {

// Identifies one reproducible random stream.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    // Child stream `index`; children of distinct indices never collide with
    // each other for a fixed parent.
    RngSeed split(std::uint64_t index) const noexcept;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

namespace detail {
constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

inline RngSeed RngSeed::split(std::uint64_t index) const noexcept {
    return {seed, detail::splitmix_finalize(stream ^ detail::splitmix_finalize(index + 0x632be59bd9b4e019ULL))};
}

// Counter-based generator: output n is a keyed SplitMix64 finalizer applied to
// n, so a stream is fully determined by (seed, stream) and the draw count.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(RngSeed s) noexcept
        : key_(detail::splitmix_finalize(s.seed) ^ detail::splitmix_finalize(s.stream + 0x9e3779b97f4a7c15ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept { return detail::splitmix_finalize(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open0() noexcept { return 1.0 - uniform(); }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    // Standard complex Gaussian: real and imaginary parts independent N(0, 1/2).
    std::complex<double> complex_normal() noexcept {
        const double r = std::sqrt(-std::log(uniform_open0()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Standard real Gaussian.
    double normal() noexcept { return std::numbers::sqrt2 * complex_normal().real(); }

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace bergman
