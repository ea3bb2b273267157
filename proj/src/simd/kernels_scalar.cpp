#include "bergman/simd.hpp"

namespace bergman::simd {
namespace {

// Plain real arithmetic; std::complex operator* carries Annex G NaN recovery
// that we do not need on finite inputs.
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void axpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += mul(a, x[i]);
}

cplx dotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void rot2_scalar(std::size_t n, cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i], yi = y[i];
        x[i] = mul(a, xi) + mul(b, yi);
        y[i] = mul(c, xi) + mul(d, yi);
    }
}

} // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{"scalar", &axpy_scalar, &dotc_scalar, &rot2_scalar};
    return table;
}

} // namespace bergman::simd
