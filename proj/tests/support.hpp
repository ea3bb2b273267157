#pragma once

// Test-only oracles, written without the library's linear algebra so the
// comparisons are independent.

#include "bergman/dpp.hpp"

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

using cplx = std::complex<double>;
using Dense = std::vector<std::vector<cplx>>;

inline Dense to_dense(const bergman::ComplexMatrix& m) {
    Dense d(m.rows(), std::vector<cplx>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
    return d;
}

// Gaussian elimination with partial pivoting.
inline cplx naive_det(Dense a) {
    const std::size_t n = a.size();
    cplx d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (a[p][c] == cplx{}) return 0.0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const cplx f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return d;
}

// P(X = A) = (-1)^{|A^c|} det(K - 1_{A^c}) for every A, by bitmask.
inline std::vector<double> pmf_oracle(const bergman::ComplexMatrix& k) {
    const std::size_t m = k.rows();
    std::vector<double> out(std::size_t{1} << m);
    for (std::size_t a = 0; a < out.size(); ++a) {
        Dense d = to_dense(k);
        int sign = 1;
        for (std::size_t i = 0; i < m; ++i)
            if (!((a >> i) & 1u)) {
                d[i][i] -= 1.0;
                sign = -sign;
            }
        out[a] = sign * naive_det(d).real();
    }
    return out;
}

inline Dense random_dense(std::size_t n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Dense d(n, std::vector<cplx>(n));
    for (auto& row : d)
        for (auto& x : row) x = {u(gen), u(gen)};
    return d;
}

inline bergman::ComplexMatrix from_dense(const Dense& d) {
    bergman::ComplexMatrix m(d.size(), d.empty() ? 0 : d[0].size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = d[i][j];
    return m;
}

inline bergman::ComplexMatrix random_hermitian(std::size_t n, std::uint32_t seed) {
    const Dense a = random_dense(n, seed);
    bergman::ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (a[i][j] + std::conj(a[j][i]));
    return h;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace testing
