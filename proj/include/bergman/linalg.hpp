#pragma once

#include "bergman/matrix.hpp"

#include <vector>

namespace bergman {

struct HermitianEig {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // column k pairs with values[k]
};

// Cyclic Jacobi. The input is symmetrized first, so O(1e-14) asymmetry from
// quadrature is harmless. Throws ConvergenceError after 100 sweeps.
HermitianEig hermitian_eig(const ComplexMatrix& m);
std::vector<double> hermitian_eigvals(const ComplexMatrix& m);

// Partial-pivot LU determinant of a general square matrix; 0 when singular.
cplx det(const ComplexMatrix& m);

// Determinant of a Hermitian matrix as the product of its eigenvalues.
double hermitian_det(const ComplexMatrix& m);

// Solves M X = B by partial-pivot LU. Throws SingularMatrixError when the
// pivot ratio min|u_ii| / max|u_ii| falls below `pivot_floor`.
ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b, double pivot_floor = 1e-12);

// det(I - K) = prod(1 - lambda_k) for Hermitian K with spectrum in [0, 1].
double fredholm_det_finite(const ComplexMatrix& k);

struct ClampResult {
    ComplexMatrix matrix;
    double moved = 0.0; // sum over eigenvalues of |lambda - clamped(lambda)|
};

// Clamp the spectrum of a Hermitian matrix into [lo, hi]. Inputs already in
// range (to 1e-12 relative) come back unchanged, which makes it idempotent.
ComplexMatrix psd_clamp(const ComplexMatrix& m, double lo, double hi);
ClampResult psd_clamp_report(const ComplexMatrix& m, double lo, double hi);

} // namespace bergman
