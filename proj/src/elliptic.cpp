#include "bergman/elliptic.hpp"

#include "bergman/errors.hpp"

#include <cmath>
#include <numbers>

namespace bergman::elliptic {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Lagrange reduction of the basis (a, b): afterwards |a| <= |b| and
// |Re(b / a)| <= 1/2.
void reduce_basis(cplx& a, cplx& b) {
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(b) < std::abs(a)) std::swap(a, b);
        const double k = std::round((b / a).real());
        if (k == 0.0) break;
        b -= k * a;
    }
    if (std::abs(b) < std::abs(a)) std::swap(a, b);
    if ((b / a).imag() < 0.0) b = -b;
}


} // namespace

Lattice::Lattice(PeriodPair periods, int terms) : periods_(periods), terms_(terms) {
    if (terms < 20) throw std::invalid_argument("elliptic: at least 20 series terms required");
    if (periods.p1 == cplx{} || periods.p2 == cplx{}) throw std::invalid_argument("elliptic: zero period");
    if (std::abs((periods.p2 / periods.p1).imag()) < 1e-12)
        throw std::invalid_argument("elliptic: degenerate lattice, periods are collinear");
    cplx a = periods.p1, b = periods.p2;
    reduce_basis(a, b);
    w1_ = 0.5 * a;
    w3_ = 0.5 * b;
    q2_ = std::exp(2.0 * kPi * kI * (w3_ / w1_));

    // eta1 = pi^2/(12 w1) (1 - 24 sum n q^2n / (1 - q^2n))
    cplx s = 0.0, q2n = 1.0;
    for (int n = 1; n <= terms_; ++n) {
        q2n *= q2_;
        const cplx term = static_cast<double>(n) * q2n / (1.0 - q2n);
        s += term;
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
    }
    eta_w1_ = kPi * kPi / (12.0 * w1_) * (1.0 - 24.0 * s);
    // Legendre: eta(w1) w3 - eta(w3) w1 = pi i / 2
    eta_w3_ = (eta_w1_ * w3_ - 0.5 * kPi * kI) / w1_;
}

Lattice::Reduced Lattice::reduce(cplx u) const {
    const cplx tau = w3_ / w1_;
    const cplx x = u / (2.0 * w1_);
    const double y = x.imag() / tau.imag();
    const double xr = x.real() - y * tau.real();
    Reduced r;
    r.m = std::lround(xr);
    r.n = std::lround(y);
    r.u = u - 2.0 * static_cast<double>(r.m) * w1_ - 2.0 * static_cast<double>(r.n) * w3_;
    return r;
}

void Lattice::require_off_lattice(const Reduced& r) const {
    if (std::abs(r.u) <= 1e-14 * std::abs(w1_)) throw PoleError("elliptic: argument is a lattice point");
}

cplx Lattice::wp(cplx u) const {
    const Reduced r = reduce(u);
    require_off_lattice(r);
    const cplx c = kPi / (2.0 * w1_);
    const cplx v = c * r.u;
    const cplx sv = std::sin(v);
    cplx s = 0.0, q2n = 1.0;
    for (int n = 1; n <= terms_; ++n) {
        q2n *= q2_;
        const cplx term = static_cast<double>(n) * q2n / (1.0 - q2n) * std::cos(2.0 * static_cast<double>(n) * v);
        s += term;
        if (std::abs(term) < 1e-17 * (std::abs(s) + 1.0 / std::norm(sv))) break;
    }
    return -eta_w1_ / w1_ + c * c * (1.0 / (sv * sv) - 8.0 * s);
}

cplx Lattice::wp_prime(cplx u) const {
    const Reduced r = reduce(u);
    require_off_lattice(r);
    const cplx c = kPi / (2.0 * w1_);
    const cplx v = c * r.u;
    const cplx sv = std::sin(v);
    const cplx lead = -2.0 * std::cos(v) / (sv * sv * sv);
    cplx s = 0.0, q2n = 1.0;
    for (int n = 1; n <= terms_; ++n) {
        q2n *= q2_;
        const double dn = static_cast<double>(n);
        const cplx term = dn * dn * q2n / (1.0 - q2n) * std::sin(2.0 * dn * v);
        s += term;
        if (std::abs(term) < 1e-17 * (std::abs(s) + std::abs(lead))) break;
    }
    return c * c * c * (lead + 16.0 * s);
}

cplx Lattice::zeta(cplx u) const {
    const Reduced r = reduce(u);
    require_off_lattice(r);
    const cplx c = kPi / (2.0 * w1_);
    const cplx v = c * r.u;
    const cplx cot = std::cos(v) / std::sin(v);
    cplx s = 0.0, q2n = 1.0;
    for (int n = 1; n <= terms_; ++n) {
        q2n *= q2_;
        const cplx term = q2n / (1.0 - q2n) * std::sin(2.0 * static_cast<double>(n) * v);
        s += term;
        if (std::abs(term) < 1e-17 * (std::abs(s) + std::abs(cot))) break;
    }
    const cplx base = eta_w1_ * r.u / w1_ + c * (cot + 4.0 * s);
    return base + 2.0 * static_cast<double>(r.m) * eta_w1_ + 2.0 * static_cast<double>(r.n) * eta_w3_;
}

cplx Lattice::eta1() const { return zeta(0.5 * periods_.p1); }
cplx Lattice::eta2() const { return zeta(0.5 * periods_.p2); }

cplx Lattice::g2() const {
    // g2 = (pi/w1)^4 / 12 * (1 + 240 sum sigma_3(n) q^2n)
    cplx s = 0.0, q2n = 1.0;
    for (int n = 1; n <= terms_; ++n) {
        q2n *= q2_;
        const double dn = static_cast<double>(n);
        const cplx term = dn * dn * dn * q2n / (1.0 - q2n);
        s += term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(s))) break;
    }
    const cplx c = kPi / w1_;
    return c * c * c * c / 12.0 * (1.0 + 240.0 * s);
}

cplx Lattice::g3() const {
    // g3 = (pi/w1)^6 / 216 * (1 - 504 sum sigma_5(n) q^2n)
    cplx s = 0.0, q2n = 1.0;
    for (int n = 1; n <= terms_; ++n) {
        q2n *= q2_;
        const double dn = static_cast<double>(n);
        const cplx term = dn * dn * dn * dn * dn * q2n / (1.0 - q2n);
        s += term;
        if (std::abs(term) < 1e-17 * (1.0 + std::abs(s))) break;
    }
    const cplx c = kPi / w1_;
    const cplx c2 = c * c;
    return c2 * c2 * c2 / 216.0 * (1.0 - 504.0 * s);
}

cplx wp(cplx u, PeriodPair periods, int terms) { return Lattice(periods, terms).wp(u); }
cplx wp_prime(cplx u, PeriodPair periods, int terms) { return Lattice(periods, terms).wp_prime(u); }
cplx wzeta(cplx u, PeriodPair periods, int terms) { return Lattice(periods, terms).zeta(u); }
cplx eta1(PeriodPair periods, int terms) { return Lattice(periods, terms).eta1(); }

} // namespace bergman::elliptic
