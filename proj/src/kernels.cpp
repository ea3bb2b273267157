#include "bergman/kernels.hpp"

#include "bergman/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bergman {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double sum_norm2(const Point& z) {
    double s = 0.0;
    for (const cplx& c : z.coords) s += std::norm(c);
    return s;
}

void require_inside(const DomainSpec& spec, const Point& z) {
    if (!contains(spec, z)) throw DomainError("point lies outside the open domain " + describe(spec));
}

} // namespace

void validate(const DomainSpec& spec) {
    std::visit(overloaded{
                   [](const Disk& d) {
                       if (!(d.alpha > -1.0) || !std::isfinite(d.alpha))
                           throw std::invalid_argument("disk weight exponent alpha must exceed -1");
                   },
                   [](const Annulus& a) {
                       if (!(a.rho > 0.0 && a.rho < 1.0))
                           throw std::invalid_argument("annulus inner radius rho must lie in (0, 1)");
                   },
                   [](const Polydisk& p) {
                       if (p.d < 1) throw std::invalid_argument("polydisk dimension must be >= 1");
                   },
                   [](const Ball& b) {
                       if (b.d < 1) throw std::invalid_argument("ball dimension must be >= 1");
                   },
               },
               spec);
}

std::size_t dimension(const DomainSpec& spec) {
    return std::visit(overloaded{
                          [](const Disk&) -> std::size_t { return 1; },
                          [](const Annulus&) -> std::size_t { return 1; },
                          [](const Polydisk& p) { return p.d; },
                          [](const Ball& b) { return b.d; },
                      },
                      spec);
}

std::string describe(const DomainSpec& spec) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Disk& d) { os << "disk(alpha=" << d.alpha << ")"; },
                   [&](const Annulus& a) { os << "annulus(rho=" << a.rho << ")"; },
                   [&](const Polydisk& p) { os << "polydisk(d=" << p.d << ")"; },
                   [&](const Ball& b) { os << "ball(d=" << b.d << ")"; },
               },
               spec);
    return os.str();
}

bool contains(const DomainSpec& spec, const Point& z) {
    if (z.coords.size() != dimension(spec)) return false;
    for (const cplx& c : z.coords)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return std::visit(overloaded{
                          [&](const Disk&) { return std::abs(z.coords[0]) < 1.0; },
                          [&](const Annulus& a) {
                              const double r = std::abs(z.coords[0]);
                              return r > a.rho && r < 1.0;
                          },
                          [&](const Polydisk&) {
                              for (const cplx& c : z.coords)
                                  if (!(std::abs(c) < 1.0)) return false;
                              return true;
                          },
                          [&](const Ball&) { return sum_norm2(z) < 1.0; },
                      },
                      spec);
}

double ball_volume(std::size_t d) {
    double v = 1.0;
    for (std::size_t k = 1; k <= d; ++k) v *= kPi / static_cast<double>(k);
    return v;
}

double weight(const DomainSpec& spec, const Point& z) {
    validate(spec);
    require_inside(spec, z);
    if (const auto* disk = std::get_if<Disk>(&spec)) {
        if (disk->alpha == 0.0) return 1.0;
        return (1.0 + disk->alpha) * std::pow(1.0 - std::norm(z.coords[0]), disk->alpha);
    }
    return 1.0;
}

elliptic::PeriodPair annulus_periods(double rho) { return {cplx{0.0, 2.0 * kPi}, cplx{2.0 * std::log(rho), 0.0}}; }

KernelEvaluator::KernelEvaluator(DomainSpec spec) : spec_(spec) {
    validate(spec_);
    if (const auto* a = std::get_if<Annulus>(&spec_)) {
        lattice_.emplace(annulus_periods(a->rho));
        annulus_shift_ = lattice_->eta1() / (kPi * cplx{0.0, 1.0}) - 1.0 / (2.0 * std::log(a->rho));
    }
}

cplx KernelEvaluator::operator()(const Point& z, const Point& w) const {
    require_inside(spec_, z);
    require_inside(spec_, w);
    return std::visit(overloaded{
                          [&](const Disk& d) -> cplx {
                              const cplx base = 1.0 - z.coords[0] * std::conj(w.coords[0]);
                              const cplx p = d.alpha == 0.0 ? base * base : std::exp((2.0 + d.alpha) * std::log(base));
                              return 1.0 / (kPi * p);
                          },
                          [&](const Annulus&) -> cplx {
                              const cplx t = z.coords[0] * std::conj(w.coords[0]);
                              return (lattice_->wp(std::log(t)) + annulus_shift_) / (kPi * t);
                          },
                          [&](const Polydisk& p) -> cplx {
                              cplx k = 1.0;
                              for (std::size_t j = 0; j < p.d; ++j) {
                                  const cplx base = 1.0 - z.coords[j] * std::conj(w.coords[j]);
                                  k /= kPi * base * base;
                              }
                              return k;
                          },
                          [&](const Ball& b) -> cplx {
                              cplx dot = 0.0;
                              for (std::size_t j = 0; j < b.d; ++j) dot += z.coords[j] * std::conj(w.coords[j]);
                              const cplx base = 1.0 - dot;
                              cplx p = 1.0;
                              for (std::size_t j = 0; j <= b.d; ++j) p *= base;
                              return 1.0 / (ball_volume(b.d) * p);
                          },
                      },
                      spec_);
}

cplx eval_kernel(const DomainSpec& spec, const Point& z, const Point& w) { return KernelEvaluator(spec)(z, w); }

double annulus_monomial_norm2(double rho, long n) {
    if (n == -1) return 2.0 * kPi * std::log(1.0 / rho);
    const double e = 2.0 * static_cast<double>(n) + 2.0;
    return 2.0 * kPi * (1.0 - std::pow(rho, e)) / e;
}

LaurentValue annulus_laurent_oracle(double rho, cplx z, cplx w, std::size_t terms) {
    const cplx t = z * std::conj(w);
    const double rho2 = rho * rho;
    const double x = std::abs(t);
    const double y = rho2 / x;

    // n = -1
    cplx sum = 1.0 / (t * annulus_monomial_norm2(rho, -1));
    // n >= 0: (n + 1) t^n / (pi (1 - rho^(2n+2)))
    cplx tn = 1.0;
    double rpow = rho2;
    for (std::size_t n = 0; n <= terms; ++n) {
        sum += static_cast<double>(n + 1) * tn / (kPi * (1.0 - rpow));
        tn *= t;
        rpow *= rho2;
    }
    // n = -k, k >= 2: ((k - 1) / (pi rho^2)) (rho^2 / t)^k / (1 - rho^(2k-2))
    const cplx s = rho2 / t;
    cplx sk = s;
    double r2k2 = 1.0;
    for (std::size_t k = 2; k <= terms; ++k) {
        sk *= s;
        r2k2 *= rho2;
        sum += static_cast<double>(k - 1) * sk / (kPi * rho2 * (1.0 - r2k2));
    }

    const double n1 = static_cast<double>(terms) + 1.0;
    double tail = 0.0;
    if (x < 1.0) tail += (n1 + 1.0) * std::pow(x, n1) / ((1.0 - x) * (1.0 - x) * kPi * (1.0 - rho2));
    if (y < 1.0) tail += n1 * std::pow(y, n1) / ((1.0 - y) * (1.0 - y) * kPi * rho2 * (1.0 - rho2));
    return {sum, tail};
}

double disk_monomial_norm2(double alpha, std::size_t n) {
    const double dn = static_cast<double>(n);
    const double log_beta = std::lgamma(dn + 1.0) + std::lgamma(alpha + 1.0) - std::lgamma(dn + alpha + 2.0);
    return (1.0 + alpha) * kPi * std::exp(log_beta);
}

cplx disk_basis_kernel(double alpha, std::size_t terms, cplx z, cplx w) {
    if (!(std::abs(z) < 1.0 && std::abs(w) < 1.0)) throw DomainError("disk_basis_kernel: point outside the unit disk");
    const cplx t = z * std::conj(w);
    cplx tn = 1.0, sum = 0.0;
    for (std::size_t n = 0; n < terms; ++n) {
        sum += tn / disk_monomial_norm2(alpha, n);
        tn *= t;
    }
    return sum;
}

std::size_t annulus_laurent_terms(double rho, cplx z, cplx w) {
    const double x = std::abs(z * std::conj(w));
    const double ratio = std::max(x, rho * rho / x);
    if (!(ratio < 1.0)) throw DomainError("annulus_laurent_terms: points outside the annulus");
    const double n = std::log(1e-20) / std::log(ratio);
    return static_cast<std::size_t>(std::min(20000.0, std::ceil(n) + 50.0));
}

AnnulusCheck annulus_cross_check(double rho, std::size_t pairs, RngSeed seed) {
    const DomainSpec spec = Annulus{rho};
    validate(spec);
    KernelEvaluator eval(spec);
    CounterRng rng(seed);
    const double lo = rho + (1.0 - rho) / 10.0;
    const double hi = 1.0 - (1.0 - rho) / 10.0;
    auto draw = [&] { return std::polar(lo + (hi - lo) * rng.uniform(), 2.0 * kPi * rng.uniform()); };

    AnnulusCheck out;
    out.rho = rho;
    out.pairs = pairs;
    out.seed = seed;
    for (std::size_t i = 0; i < pairs; ++i) {
        const cplx z = draw();
        const cplx w = draw();
        const cplx closed = eval(Point{{z}}, Point{{w}});
        const LaurentValue series = annulus_laurent_oracle(rho, z, w, annulus_laurent_terms(rho, z, w));
        const double zz = annulus_laurent_oracle(rho, z, z, annulus_laurent_terms(rho, z, z)).value.real();
        const double ww = annulus_laurent_oracle(rho, w, w, annulus_laurent_terms(rho, w, w)).value.real();
        const double scale = std::sqrt(zz * ww);
        const double diff = std::abs(closed - series.value);
        out.max_rel_error = std::max(out.max_rel_error, diff / scale);
        out.max_pointwise_rel_error = std::max(out.max_pointwise_rel_error, diff / std::abs(series.value));
        out.max_tail_bound = std::max(out.max_tail_bound, series.tail_bound / scale);
    }
    out.pass = out.max_rel_error <= kAnnulusTolerance && out.max_tail_bound < 1e-12;
    return out;
}

} // namespace bergman
