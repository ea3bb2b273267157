#pragma once

#include "bergman/elliptic.hpp"
#include "bergman/rng.hpp"

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;

struct Disk {
    double alpha = 0.0; // weight (1 + alpha)(1 - |z|^2)^alpha, alpha > -1
};
struct Annulus {
    double rho = 0.5; // rho < |z| < 1
};
struct Polydisk {
    std::size_t d = 1;
};
struct Ball {
    std::size_t d = 1;
};

using DomainSpec = std::variant<Disk, Annulus, Polydisk, Ball>;

// Throws std::invalid_argument on out-of-range parameters.
void validate(const DomainSpec& spec);
std::size_t dimension(const DomainSpec& spec);
std::string describe(const DomainSpec& spec);

struct Point {
    std::vector<cplx> coords;

    Point() = default;
    Point(std::initializer_list<cplx> c) : coords(c) {}
    explicit Point(std::vector<cplx> c) : coords(std::move(c)) {}
};

bool contains(const DomainSpec& spec, const Point& z);

// Lebesgue volume of the unit ball of C^d: pi^d / d!.
double ball_volume(std::size_t d);

// Weight function omega; 1 except for the weighted disk.
double weight(const DomainSpec& spec, const Point& z);

// Reproducing kernel K(z, w) of the weighted Bergman space of `spec`.
// Construct once and evaluate many times; the annulus precomputes its lattice.
class KernelEvaluator {
public:
    explicit KernelEvaluator(DomainSpec spec);

    cplx operator()(const Point& z, const Point& w) const;
    const DomainSpec& spec() const noexcept { return spec_; }

private:
    DomainSpec spec_;
    std::optional<elliptic::Lattice> lattice_;
    cplx annulus_shift_{}; // eta1 / (pi i) - 1 / (2 ln rho)
};

cplx eval_kernel(const DomainSpec& spec, const Point& z, const Point& w);

// Periods of the annulus lattice: 2 pi i and 2 ln rho.
elliptic::PeriodPair annulus_periods(double rho);

struct LaurentValue {
    cplx value;
    double tail_bound = 0.0;
};

// sum_{|n| <= N} (z conj w)^n / c_n over the orthogonal Laurent monomials of
// the unweighted annulus, c_n = ||z^n||^2.
LaurentValue annulus_laurent_oracle(double rho, cplx z, cplx w, std::size_t terms);

// ||z^n||^2 in the unweighted annulus: 2 pi (1 - rho^(2n+2)) / (2n+2), and
// 2 pi ln(1/rho) for n = -1.
double annulus_monomial_norm2(double rho, long n);

// ||z^n||^2 in A^2(D, omega_alpha): (1 + alpha) pi B(n + 1, alpha + 1).
double disk_monomial_norm2(double alpha, std::size_t n);

// Rank-N truncation sum_{n < N} z^n conj(w)^n / ||z^n||^2.
cplx disk_basis_kernel(double alpha, std::size_t terms, cplx z, cplx w);

// Series length that takes the Laurent tail below 1e-20 of the leading terms.
std::size_t annulus_laurent_terms(double rho, cplx z, cplx w);

struct AnnulusCheck {
    double rho = 0.0;
    std::size_t pairs = 0;
    // |closed - series| / sqrt(K(z, z) K(w, w)). The kernel nearly vanishes
    // where z conj(w) is close to the negative axis, so the error is measured
    // against its Cauchy-Schwarz bound rather than |K(z, w)| itself.
    double max_rel_error = 0.0;
    double max_pointwise_rel_error = 0.0; // against |K(z, w)|, informational
    double max_tail_bound = 0.0;          // same scale as max_rel_error
    bool pass = false;
    RngSeed seed;
};

inline constexpr double kAnnulusTolerance = 1e-8;

// Closed-form annulus kernel against the Laurent series at random pairs with
// radii in [rho + (1 - rho) / 10, 1 - (1 - rho) / 10].
AnnulusCheck annulus_cross_check(double rho, std::size_t pairs, RngSeed seed);

} // namespace bergman
