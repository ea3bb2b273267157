#pragma once

#include "bergman/discretize.hpp"
#include "bergman/linalg.hpp"
#include "bergman/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bergman {

// Sorted, duplicate-free ground-set indices.
struct Configuration {
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }
    bool contains(std::size_t i) const;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Sorts and validates against a ground set of size m.
Configuration make_configuration(std::vector<std::size_t> indices, std::size_t ground_size);

inline constexpr std::size_t kMaxExactSites = 12;

using Mask = std::uint32_t;
Mask to_mask(const Configuration& c);
Configuration from_mask(Mask mask, std::size_t ground_size);

// Probability mass over all subsets of a ground set of size m <= 12,
// indexed by bitmask (bit i set <=> site i present).
struct ConfigPmf {
    std::size_t ground = 0;
    std::vector<double> mass;

    double total() const;
};

double total_variation(const ConfigPmf& a, const ConfigPmf& b);

// det K_A; 1 for the empty set.
double correlation(const DppKernel& k, const Configuration& a);

// det(I - K_B): probability of no point in B.
double gap_probability(const DppKernel& k, std::span<const std::size_t> b);

// pmf of a sum of independent Bernoulli(p_k) by the exact O(n^2) recurrence.
std::vector<double> poisson_binomial(std::span<const double> p);

// Law of the number of points: Poisson-binomial of the spectrum.
std::vector<double> number_distribution(const DppKernel& k);

// Exact law of the configuration. Strict contractions use the L-ensemble
// L = K (I - K)^-1; kernels flagged as projections use Moebius inversion of
// the correlations. m <= 12.
ConfigPmf exact_distribution(const DppKernel& k);

// Spectral sampler: eigendecompose once, sample many times.
class Sampler {
public:
    explicit Sampler(const DppKernel& k);

    Configuration sample(RngSeed seed) const;
    Configuration sample(CounterRng& rng) const;

    const HermitianEig& eig() const noexcept { return eig_; }

private:
    HermitianEig eig_;
};

Configuration sample(const DppKernel& k, RngSeed seed);

// Samples the projection DPP onto the span of the columns of `v`
// (orthonormal) by sequential one-point Palm conditioning.
Configuration sample_projection(const ComplexMatrix& v, CounterRng& rng);

// Haar-random eigenbasis with eigenvalues uniform in [lo, hi].
DppKernel random_contraction(std::size_t m, RngSeed seed, double lo = 0.05, double hi = 0.95);
// Haar-random rank-r orthogonal projection, flagged as a projection.
DppKernel random_projection(std::size_t m, std::size_t rank, RngSeed seed);

} // namespace bergman
