#include "bergman/linalg.hpp"

#include "bergman/errors.hpp"
#include "bergman/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bergman {
namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffTolerance = 1e-13;

void require_square(const ComplexMatrix& m, const char* who) {
    if (!m.square()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
}

void require_finite(const ComplexMatrix& m, const char* who) {
    if (!m.all_finite()) throw ContractViolation(std::string(who) + ": non-finite entry");
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
}

// Runs Jacobi sweeps on `a` in place; accumulates rotations into the rows of
// `vt` (row k = eigenvector k) when non-null.
void jacobi(ComplexMatrix& a, ComplexMatrix* vt) {
    const std::size_t n = a.rows();
    const double scale = a.frobenius();
    if (n < 2 || scale == 0.0) return;
    const double target = kOffTolerance * scale;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off <= target) return;
        const double threshold = sweep < 3 ? 0.2 * off * off / static_cast<double>(n * n) : 0.0;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double b = std::abs(g);
                if (b == 0.0 || b * b < threshold) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                if (sweep > 3 && std::abs(app) + 100.0 * b == std::abs(app) &&
                    std::abs(aqq) + 100.0 * b == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx e = g / b;
                const double theta = (aqq - app) / (2.0 * b);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // Rows p, q of U* A with U = [[c, s], [-s conj(e), c conj(e)]].
                simd::rot2(n, c, -s * e, s, c * e, a.row(p).data(), a.row(q).data());
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    a(k, p) = std::conj(a(p, k));
                    a(k, q) = std::conj(a(q, k));
                }
                a(p, p) = app - t * b;
                a(q, q) = aqq + t * b;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (vt != nullptr) {
                    const cplx ec = std::conj(e);
                    simd::rot2(n, c, -s * ec, s, c * ec, vt->row(p).data(), vt->row(q).data());
                }
            }
        }
    }
    if (off_diagonal_norm(a) > target)
        throw ConvergenceError("hermitian_eig: Jacobi did not converge in 100 sweeps");
}

std::vector<std::size_t> ascending_order(const ComplexMatrix& a) {
    std::vector<std::size_t> order(a.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
    return order;
}

struct LU {
    ComplexMatrix a;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
    double pivot_ratio = 0.0;
};

LU lu_decompose(const ComplexMatrix& m) {
    LU lu{m, std::vector<std::size_t>(m.rows()), 1, false, 0.0};
    const std::size_t n = m.rows();
    std::iota(lu.perm.begin(), lu.perm.end(), std::size_t{0});
    ComplexMatrix& a = lu.a;
    double max_pivot = 0.0, min_pivot = INFINITY;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        max_pivot = std::max(max_pivot, best);
        min_pivot = std::min(min_pivot, best);
        if (best == 0.0) {
            lu.singular = true;
            continue;
        }
        if (piv != k) {
            std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(piv).begin());
            std::swap(lu.perm[k], lu.perm[piv]);
            lu.sign = -lu.sign;
        }
        const cplx inv = 1.0 / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = a(i, k) * inv;
            a(i, k) = l;
            if (l != cplx{0.0, 0.0}) simd::axpy(n - k - 1, -l, a.row(k).data() + k + 1, a.row(i).data() + k + 1);
        }
    }
    lu.pivot_ratio = (n == 0 || max_pivot == 0.0) ? (n == 0 ? 1.0 : 0.0) : min_pivot / max_pivot;
    return lu;
}

} // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m) {
    require_square(m, "hermitian_eig");
    require_finite(m, "hermitian_eig");
    ComplexMatrix a = m.hermitian_part();
    ComplexMatrix vt = ComplexMatrix::identity(m.rows());
    jacobi(a, &vt);

    const auto order = ascending_order(a);
    HermitianEig out{std::vector<double>(m.rows()), ComplexMatrix(m.rows(), m.rows())};
    for (std::size_t k = 0; k < order.size(); ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < m.rows(); ++i) out.vectors(i, k) = vt(order[k], i);
    }
    return out;
}

std::vector<double> hermitian_eigvals(const ComplexMatrix& m) {
    require_square(m, "hermitian_eigvals");
    require_finite(m, "hermitian_eigvals");
    ComplexMatrix a = m.hermitian_part();
    jacobi(a, nullptr);
    std::vector<double> values(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) values[i] = a(i, i).real();
    std::sort(values.begin(), values.end());
    return values;
}

cplx det(const ComplexMatrix& m) {
    require_square(m, "det");
    if (m.rows() == 0) return 1.0;
    const LU lu = lu_decompose(m);
    if (lu.singular) return 0.0;
    cplx d = static_cast<double>(lu.sign);
    for (std::size_t i = 0; i < m.rows(); ++i) d *= lu.a(i, i);
    return d;
}

double hermitian_det(const ComplexMatrix& m) {
    double d = 1.0;
    for (double v : hermitian_eigvals(m)) d *= v;
    return d;
}

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b, double pivot_floor) {
    require_square(m, "solve");
    if (b.rows() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong row count");
    const std::size_t n = m.rows();
    if (n == 0) return b;
    const LU lu = lu_decompose(m);
    if (lu.singular || lu.pivot_ratio < pivot_floor) {
        const double cond = lu.pivot_ratio > 0.0 ? 1.0 / lu.pivot_ratio : INFINITY;
        throw SingularMatrixError("solve: matrix is numerically singular (pivot condition estimate " +
                                      std::to_string(cond) + ")",
                                  cond);
    }
    const std::size_t nrhs = b.cols();
    ComplexMatrix x(n, nrhs);
    for (std::size_t i = 0; i < n; ++i) std::copy(b.row(lu.perm[i]).begin(), b.row(lu.perm[i]).end(), x.row(i).begin());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k)
            if (lu.a(i, k) != cplx{0.0, 0.0}) simd::axpy(nrhs, -lu.a(i, k), x.row(k).data(), x.row(i).data());
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k)
            if (lu.a(ii, k) != cplx{0.0, 0.0}) simd::axpy(nrhs, -lu.a(ii, k), x.row(k).data(), x.row(ii).data());
        const cplx inv = 1.0 / lu.a(ii, ii);
        for (cplx& v : x.row(ii)) v *= inv;
    }
    return x;
}

double fredholm_det_finite(const ComplexMatrix& k) {
    require_square(k, "fredholm_det_finite");
    double d = 1.0;
    for (double lambda : hermitian_eigvals(k)) {
        if (lambda < -1e-9 || lambda > 1.0 + 1e-9)
            throw ContractViolation("fredholm_det_finite: eigenvalue " + std::to_string(lambda) +
                                    " outside [0, 1]");
        d *= std::clamp(1.0 - lambda, 0.0, 1.0);
    }
    return d;
}

ClampResult psd_clamp_report(const ComplexMatrix& m, double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("psd_clamp: lo > hi");
    HermitianEig eig = hermitian_eig(m);
    double scale = 1.0;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));
    const double slack = 1e-12 * scale;
    bool inside = true;
    for (double v : eig.values) inside = inside && v >= lo - slack && v <= hi + slack;
    if (inside) return {m, 0.0};

    double moved = 0.0;
    const std::size_t n = m.rows();
    ComplexMatrix scaled = eig.vectors;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::clamp(eig.values[k], lo, hi);
        moved += std::abs(c - eig.values[k]);
        for (std::size_t i = 0; i < n; ++i) scaled(i, k) *= c;
    }
    return {(scaled * eig.vectors.adjoint()).hermitian_part(), moved};
}

ComplexMatrix psd_clamp(const ComplexMatrix& m, double lo, double hi) { return psd_clamp_report(m, lo, hi).matrix; }

} // namespace bergman
