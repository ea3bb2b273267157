#include "bergman/dpp.hpp"

#include "bergman/errors.hpp"
#include "bergman/palm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace bergman {

bool Configuration::contains(std::size_t i) const { return std::binary_search(indices.begin(), indices.end(), i); }

Configuration make_configuration(std::vector<std::size_t> indices, std::size_t ground_size) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw std::invalid_argument("configuration: repeated index");
    if (!indices.empty() && indices.back() >= ground_size)
        throw std::out_of_range("configuration: index outside the ground set");
    return Configuration{std::move(indices)};
}

Mask to_mask(const Configuration& c) {
    Mask m = 0;
    for (std::size_t i : c.indices) {
        if (i >= 32) throw std::out_of_range("to_mask: index does not fit a bitmask");
        m |= Mask{1} << i;
    }
    return m;
}

Configuration from_mask(Mask mask, std::size_t ground_size) {
    Configuration c;
    for (std::size_t i = 0; i < ground_size; ++i)
        if (mask & (Mask{1} << i)) c.indices.push_back(i);
    return c;
}

double ConfigPmf::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

double total_variation(const ConfigPmf& a, const ConfigPmf& b) {
    if (a.mass.size() != b.mass.size()) throw std::invalid_argument("total_variation: ground sets differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.mass.size(); ++i) s += std::abs(a.mass[i] - b.mass[i]);
    return 0.5 * s;
}

double correlation(const DppKernel& k, const Configuration& a) {
    if (a.empty()) return 1.0;
    if (a.indices.back() >= k.size()) throw std::out_of_range("correlation: index outside the ground set");
    if (a.size() == 1) return k.matrix(a.indices[0], a.indices[0]).real();
    return hermitian_det(k.matrix.principal(a.indices));
}

double gap_probability(const DppKernel& k, std::span<const std::size_t> b) {
    if (b.empty()) return 1.0;
    return fredholm_det_finite(restrict(k, b).matrix);
}

std::vector<double> poisson_binomial(std::span<const double> p) {
    std::vector<double> pmf(p.size() + 1, 0.0);
    pmf[0] = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double q = std::clamp(p[k], 0.0, 1.0);
        for (std::size_t j = k + 1; j > 0; --j) pmf[j] = pmf[j] * (1.0 - q) + pmf[j - 1] * q;
        pmf[0] *= 1.0 - q;
    }
    return pmf;
}

std::vector<double> number_distribution(const DppKernel& k) {
    const auto ev = hermitian_eigvals(k.matrix);
    return poisson_binomial(ev);
}

namespace {

void require_small(const DppKernel& k, const char* who) {
    if (k.size() > kMaxExactSites)
        throw ContractViolation(std::string(who) + ": ground set of " + std::to_string(k.size()) +
                            " sites exceeds the enumeration limit of 12");
}

std::vector<std::size_t> mask_indices(Mask mask) {
    std::vector<std::size_t> idx;
    while (mask != 0) {
        idx.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return idx;
}

double minor_det(const ComplexMatrix& m, Mask mask) {
    if (mask == 0) return 1.0;
    const auto idx = mask_indices(mask);
    if (idx.size() == 1) return m(idx[0], idx[0]).real();
    if (idx.size() == 2) {
        const cplx a = m(idx[0], idx[0]), b = m(idx[0], idx[1]), d = m(idx[1], idx[1]);
        return a.real() * d.real() - std::norm(b);
    }
    return hermitian_det(m.principal(idx));
}

} // namespace

ConfigPmf exact_distribution(const DppKernel& k) {
    require_small(k, "exact_distribution");
    const std::size_t m = k.size();
    const std::size_t n_masks = std::size_t{1} << m;
    ConfigPmf out{m, std::vector<double>(n_masks, 0.0)};

    if (k.projection) {
        for (Mask a = 0; a < n_masks; ++a) out.mass[a] = minor_det(k.matrix, a);
        // P(X = A) = sum_{B >= A} (-1)^{|B \ A|} det K_B
        for (std::size_t bit = 0; bit < m; ++bit) {
            const Mask b = Mask{1} << bit;
            for (Mask a = 0; a < n_masks; ++a)
                if (!(a & b)) out.mass[a] -= out.mass[a | b];
        }
    } else {
        const HermitianEig eig = hermitian_eig(k.matrix);
        if (m > 0 && eig.values.back() >= 1.0 - 1e-12)
            throw ContractViolation("exact_distribution: eigenvalue " + std::to_string(eig.values.back()) +
                                    " at 1 on the L-ensemble path; flag the kernel as a projection");
        double norm = 1.0;
        ComplexMatrix scaled = eig.vectors;
        for (std::size_t j = 0; j < m; ++j) {
            const double lam = std::max(eig.values[j], 0.0);
            norm *= 1.0 - lam;
            const double l = lam / (1.0 - lam);
            for (std::size_t i = 0; i < m; ++i) scaled(i, j) *= l;
        }
        const ComplexMatrix ell = (scaled * eig.vectors.adjoint()).hermitian_part();
        for (Mask a = 0; a < n_masks; ++a) out.mass[a] = minor_det(ell, a) * norm;
    }
    for (double& v : out.mass) v = std::max(v, 0.0);
    return out;
}

Configuration sample_projection(const ComplexMatrix& v, CounterRng& rng) {
    const std::size_t m = v.rows();
    const std::size_t n = v.cols();
    Configuration out;
    if (n == 0) return out;
    ComplexMatrix p = v * v.adjoint();
    std::vector<double> cumulative(m);
    for (std::size_t step = 0; step < n; ++step) {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            total += std::max(p(i, i).real(), 0.0);
            cumulative[i] = total;
        }
        if (!(total > 1e-12))
            throw ContractViolation("sample: projection lost its diagonal mass after " + std::to_string(step) + " points");
        const double target = rng.uniform() * total;
        // upper_bound skips sites of zero mass: their cumulative value repeats.
        const std::size_t x = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
        out.indices.push_back(x);
        if (step + 1 < n) schur_eliminate(p, x);
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

Sampler::Sampler(const DppKernel& k) : eig_(hermitian_eig(k.matrix)) {}

Configuration Sampler::sample(RngSeed seed) const {
    CounterRng rng(seed);
    return sample(rng);
}

Configuration Sampler::sample(CounterRng& rng) const {
    const std::size_t m = eig_.values.size();
    std::vector<std::size_t> kept;
    for (std::size_t k = 0; k < m; ++k)
        if (rng.uniform() < eig_.values[k]) kept.push_back(k);
    ComplexMatrix v(m, kept.size());
    for (std::size_t c = 0; c < kept.size(); ++c)
        for (std::size_t i = 0; i < m; ++i) v(i, c) = eig_.vectors(i, kept[c]);
    return sample_projection(v, rng);
}

Configuration sample(const DppKernel& k, RngSeed seed) { return Sampler(k).sample(seed); }

namespace {

// Haar unitary by Gram-Schmidt on complex Gaussian columns.
ComplexMatrix haar_unitary(std::size_t m, CounterRng& rng) {
    ComplexMatrix u(m, m);
    for (auto& v : u.data()) v = rng.complex_normal();
    // Orthonormalize columns.
    for (std::size_t j = 0; j < m; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += std::conj(u(i, k)) * u(i, j);
                for (std::size_t i = 0; i < m; ++i) u(i, j) -= dot * u(i, k);
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += std::norm(u(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < m; ++i) u(i, j) /= norm;
    }
    return u;
}

} // namespace

DppKernel random_contraction(std::size_t m, RngSeed seed, double lo, double hi) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw std::invalid_argument("random_contraction: need 0 <= lo <= hi <= 1");
    CounterRng rng(seed);
    ComplexMatrix u = haar_unitary(m, rng);
    ComplexMatrix scaled = u;
    for (std::size_t j = 0; j < m; ++j) {
        const double lam = lo + (hi - lo) * rng.uniform();
        for (std::size_t i = 0; i < m; ++i) scaled(i, j) *= lam;
    }
    return DppKernel{(scaled * u.adjoint()).hermitian_part(), false, std::nullopt, 0.0};
}

DppKernel random_projection(std::size_t m, std::size_t rank, RngSeed seed) {
    if (rank > m) throw std::invalid_argument("random_projection: rank exceeds the ground set");
    CounterRng rng(seed);
    ComplexMatrix u = haar_unitary(m, rng);
    ComplexMatrix v(m, rank);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < rank; ++j) v(i, j) = u(i, j);
    return DppKernel{(v * v.adjoint()).hermitian_part(), true, std::nullopt, 0.0};
}

} // namespace bergman
