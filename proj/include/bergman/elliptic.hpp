#pragma once

#include <complex>

namespace bergman::elliptic {

using cplx = std::complex<double>;

// Full periods of a lattice {m p1 + n p2}.
struct PeriodPair {
    cplx p1;
    cplx p2;
};

inline constexpr int kDefaultTerms = 40;

// Weierstrass functions of one lattice. Construction reduces the basis so the
// nome |q| <= exp(-pi sqrt(3) / 2); evaluation first reduces the argument to
// the fundamental cell, then sums the trigonometric q-series.
class Lattice {
public:
    explicit Lattice(PeriodPair periods, int terms = kDefaultTerms);

    cplx wp(cplx u) const;
    cplx wp_prime(cplx u) const;
    cplx zeta(cplx u) const;

    // zeta(p1 / 2): half the increment of zeta along the first period.
    cplx eta1() const;
    cplx eta2() const;

    cplx g2() const;
    cplx g3() const;

    const PeriodPair& periods() const noexcept { return periods_; }

private:
    struct Reduced {
        cplx u;          // argument moved into the fundamental cell
        long m = 0, n = 0; // u_original = u + 2 m w1 + 2 n w3
    };
    Reduced reduce(cplx u) const;
    void require_off_lattice(const Reduced& r) const;

    PeriodPair periods_;
    int terms_;
    cplx w1_, w3_;      // reduced half-periods, Im(w3 / w1) > 0
    cplx q2_;           // q^2 with q = exp(i pi w3 / w1)
    cplx eta_w1_, eta_w3_;
};

// Free-function forms.
cplx wp(cplx u, PeriodPair periods, int terms = kDefaultTerms);
cplx wp_prime(cplx u, PeriodPair periods, int terms = kDefaultTerms);
cplx wzeta(cplx u, PeriodPair periods, int terms = kDefaultTerms);
cplx eta1(PeriodPair periods, int terms = kDefaultTerms);

} // namespace bergman::elliptic
