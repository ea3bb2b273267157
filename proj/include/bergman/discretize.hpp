#pragma once

#include "bergman/kernels.hpp"
#include "bergman/matrix.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace bergman {

// Finite quadrature rule on a domain; the discrete form of omega(z) dV(z).
struct Grid {
    DomainSpec spec;
    std::vector<Point> points;
    std::vector<double> quad_weights;  // Lebesgue dV per node
    std::vector<double> weight_values; // omega at each node

    std::size_t size() const noexcept { return points.size(); }
    double measure(std::size_t i) const { return quad_weights[i] * weight_values[i]; }
};

// Polar midpoint grid for disk and annulus, tensor product of polar grids for
// the polydisk, radial shells x simplex x torus for the ball. Each cell's
// weight is its exact volume, so the weights sum to the volume of the
// inset-shrunk domain. Disk/ball radius is 1 - inset; annulus radii are
// pulled in by inset * (1 - rho) / 2 at both ends.
Grid build_grid(const DomainSpec& spec, std::size_t resolution, double inset);

// Volume of the region build_grid covers.
double grid_region_volume(const DomainSpec& spec, double inset);

// Hermitian matrix with spectrum in [0, 1] over a finite ground set.
struct DppKernel {
    ComplexMatrix matrix;
    bool projection = false;                  // exact eigenvalues in {0, 1}
    std::optional<std::vector<std::size_t>> labels; // grid node of each site
    double clamp_moved = 0.0;                 // spectrum mass moved by clamping

    std::size_t size() const noexcept { return matrix.rows(); }
};

// Wraps an arbitrary Hermitian matrix; throws ContractViolation if the
// spectrum leaves [0, 1] by more than 1e-9.
DppKernel make_kernel(ComplexMatrix m, bool projection = false);

inline constexpr double kDefaultClampDelta = 1e-6;
inline constexpr double kDefaultInset = 0.15;

// M_ij = sqrt(mu_i) K(x_i, x_j) sqrt(mu_j), mu_i = dV_i omega(x_i), then the
// spectrum is clamped to [0, 1 - delta]. Throws CoarseGridError if clamping
// moved more than 10% of the trace.
DppKernel kernel_matrix(const DomainSpec& spec, const Grid& grid, double clamp_delta = kDefaultClampDelta);

// G_nm = sum_i mu_i conj(z_i^n) z_i^m for n, m < N on a disk grid.
ComplexMatrix discrete_monomial_gram(double alpha, std::size_t terms, const Grid& grid);

// Projection onto the span of the first N monomials in the discrete inner
// product of a disk grid (Gram-Schmidt, flagged as a projection).
DppKernel basis_projection_kernel(double alpha, std::size_t terms, const Grid& grid);

// Principal compression onto `subset` (distinct indices).
DppKernel restrict(const DppKernel& k, std::span<const std::size_t> subset);

} // namespace bergman
