// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher has
// confirmed CPU support.
#include "bergman/simd.hpp"

#include <immintrin.h>

namespace bergman::simd {
namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d are, __m256d aim, __m256d x) {
    const __m256d xs = _mm256_permute_pd(x, 0b0101);
    return _mm256_fmaddsub_pd(are, x, _mm256_mul_pd(aim, xs));
}

inline __m256d load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void axpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const __m256d are = _mm256_set1_pd(a.real());
    const __m256d aim = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store(y + i, _mm256_add_pd(load(y + i), cmul(are, aim, load(x + i))));
    for (; i < n; ++i) y[i] += mul(a, x[i]);
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
    __m256d same = _mm256_setzero_pd();
    __m256d cross = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load(x + i);
        const __m256d yv = load(y + i);
        same = _mm256_fmadd_pd(xv, yv, same);
        cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
    }
    alignas(32) double s[4], c[4];
    _mm256_store_pd(s, same);
    _mm256_store_pd(c, cross);
    double re = (s[0] + s[1]) + (s[2] + s[3]);
    double im = (c[0] - c[1]) + (c[2] - c[3]);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void rot2_avx2(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
    const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
    const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
    const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load(x + i);
        const __m256d yv = load(y + i);
        store(x + i, _mm256_add_pd(cmul(ar, ai, xv), cmul(br, bi, yv)));
        store(y + i, _mm256_add_pd(cmul(cr, ci, xv), cmul(dr, di, yv)));
    }
    for (; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = mul(a, xi) + mul(b, yi);
        y[i] = mul(c, xi) + mul(d, yi);
    }
}

} // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable table{"avx2", &axpy_avx2, &dotc_avx2, &rot2_avx2};
    return table;
}

} // namespace bergman::simd
