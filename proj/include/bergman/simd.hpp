#pragma once

// Complex vector kernels behind every O(n^3) loop in the library. A scalar
// reference implementation is always built; an AVX2+FMA variant is compiled
// in its own translation unit and selected at first use when the CPU
// supports it. BERGMAN_SIMD=scalar in the environment forces the reference.

#include <complex>
#include <cstddef>
#include <string_view>

namespace bergman::simd {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;
    // y[i] += a * x[i]
    void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
    // sum_i conj(x[i]) * y[i]
    cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
    // (x, y) <- (a x + b y, c x + d y), elementwise
    void (*rot2)(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

// The table used by the library.
const KernelTable& active() noexcept;

inline void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) { active().axpy(n, a, x, y); }
inline cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return active().dotc(n, x, y); }
inline void rot2(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y) {
    active().rot2(n, a, b, c, d, x, y);
}

} // namespace bergman::simd
