#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bergman/errors.hpp"
#include "bergman/kernels.hpp"
#include "bergman/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace bergman;

namespace {

constexpr double pi = std::numbers::pi;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// (1/pi) sum_n Gamma(n + 2 + a) / (Gamma(2 + a) n!) t^n, coefficients by
// their ratio recurrence.
cplx disk_series(double alpha, cplx t, int terms) {
    cplx s = 0.0;
    cplx tn = 1.0;
    double c = 1.0;
    for (int n = 0; n < terms; ++n) {
        s += c * tn;
        c *= (n + 2.0 + alpha) / (n + 1.0);
        tn *= t;
    }
    return s / pi;
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

cplx random_in_annulus(std::mt19937& gen, double rho) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lo = rho + (1.0 - rho) / 10.0;
    const double hi = 1.0 - (1.0 - rho) / 10.0;
    return std::polar(lo + (hi - lo) * u(gen), 2.0 * pi * u(gen));
}

} // namespace

TEST_CASE("values at the origin") {
    const Point o1{0.0};
    CHECK(rel(eval_kernel(Disk{0.0}, o1, o1), 1.0 / pi) < 1e-12);
    const Point o2{0.0, 0.0};
    CHECK(rel(eval_kernel(Polydisk{2}, o2, o2), 1.0 / (pi * pi)) < 1e-12);
    for (std::size_t d = 1; d <= 4; ++d) {
        const Point o(std::vector<cplx>(d, 0.0));
        double vol = 1.0;
        for (std::size_t k = 1; k <= d; ++k) vol *= pi / double(k);
        CHECK(rel(eval_kernel(Ball{d}, o, o), 1.0 / vol) < 1e-12);
        CHECK(ball_volume(d) == doctest::Approx(vol).epsilon(1e-14));
    }
}

TEST_CASE("weighted disk kernel against its power series") {
    for (double alpha : {0.0, 0.5, 1.0, 2.5}) {
        const cplx z{0.3, -0.2};
        const cplx w{-0.1, 0.45};
        const cplx ref = disk_series(alpha, z * std::conj(w), 120);
        CHECK(rel(eval_kernel(Disk{alpha}, Point{z}, Point{w}), ref) < 1e-13);
        CHECK(rel(disk_basis_kernel(alpha, 120, z, w), ref) < 1e-12);
    }
}

TEST_CASE("monomial norms against radial quadrature") {
    for (double alpha : {0.0, 1.0, 2.0}) {
        for (std::size_t n : {0u, 1u, 5u}) {
            const double q = simpson(
                [&](double r) {
                    return (1.0 + alpha) * std::pow(1.0 - r * r, alpha) * std::pow(r, 2.0 * n) * 2.0 * pi * r;
                },
                0.0, 1.0, 4000);
            CHECK(disk_monomial_norm2(alpha, n) == doctest::Approx(q).epsilon(1e-10));
        }
    }
    const double rho = 0.4;
    for (long n : {-3L, -2L, -1L, 0L, 2L}) {
        const double q = simpson([&](double r) { return std::pow(r, 2.0 * n) * 2.0 * pi * r; }, rho, 1.0, 4000);
        CHECK(annulus_monomial_norm2(rho, n) == doctest::Approx(q).epsilon(1e-10));
    }
}

TEST_CASE("polydisk is a product and the 1-ball is the disk") {
    const Point z{cplx{0.2, 0.1}, cplx{-0.3, 0.4}};
    const Point w{cplx{0.5, -0.2}, cplx{0.1, 0.1}};
    const cplx prod = eval_kernel(Disk{0.0}, Point{z.coords[0]}, Point{w.coords[0]}) *
                      eval_kernel(Disk{0.0}, Point{z.coords[1]}, Point{w.coords[1]});
    CHECK(rel(eval_kernel(Polydisk{2}, z, w), prod) < 1e-14);
    const Point a{cplx{0.3, 0.3}};
    const Point b{cplx{-0.5, 0.2}};
    CHECK(rel(eval_kernel(Ball{1}, a, b), eval_kernel(Disk{0.0}, a, b)) < 1e-14);
}

TEST_CASE("kernels are hermitian") {
    const std::vector<std::pair<DomainSpec, std::pair<Point, Point>>> cases{
        {Disk{1.5}, {Point{cplx{0.3, 0.2}}, Point{cplx{-0.6, 0.1}}}},
        {Annulus{0.4}, {Point{cplx{0.5, 0.2}}, Point{cplx{-0.3, -0.7}}}},
        {Polydisk{2}, {Point{cplx{0.1, 0.2}, cplx{0.3, 0.0}}, Point{cplx{0.0, -0.5}, cplx{0.2, 0.2}}}},
        {Ball{3}, {Point{cplx{0.1, 0.2}, cplx{0.3, 0.0}, cplx{0.0, 0.1}}, Point{cplx{0.0, -0.5}, cplx{0.2, 0.2}, 0.1}}},
    };
    for (const auto& [spec, zw] : cases) {
        const cplx a = eval_kernel(spec, zw.first, zw.second);
        const cplx b = eval_kernel(spec, zw.second, zw.first);
        CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        CHECK(eval_kernel(spec, zw.first, zw.first).real() > 0.0);
    }
}

TEST_CASE("annulus closed form matches the laurent series") {
    std::mt19937 gen(2024);
    for (double rho : {0.3, 0.5, 0.7}) {
        KernelEvaluator eval(Annulus{rho});
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const cplx z = random_in_annulus(gen, rho);
            const cplx w = random_in_annulus(gen, rho);
            const LaurentValue lv = annulus_laurent_oracle(rho, z, w, annulus_laurent_terms(rho, z, w));
            const double zz = eval(Point{z}, Point{z}).real();
            const double ww = eval(Point{w}, Point{w}).real();
            const double scale = std::sqrt(zz * ww);
            CHECK(lv.tail_bound < 1e-13 * scale);
            worst = std::max(worst, std::abs(eval(Point{z}, Point{w}) - lv.value) / scale);
        }
        CHECK(worst <= 1e-8);
        const AnnulusCheck chk = annulus_cross_check(rho, 50, RngSeed{7, 0});
        CHECK(chk.pass);
        CHECK(chk.max_rel_error <= 1e-8);
    }
}

TEST_CASE("annulus kernel away from its near-zeros has small pointwise error") {
    const double rho = 0.5;
    KernelEvaluator eval(Annulus{rho});
    for (cplx z : {cplx{0.6, 0.0}, cplx{0.0, 0.8}, cplx{0.55, 0.55}})
        for (cplx w : {cplx{0.7, 0.1}, cplx{0.6, 0.3}}) {
            const LaurentValue lv = annulus_laurent_oracle(rho, z, w, annulus_laurent_terms(rho, z, w));
            CHECK(rel(eval(Point{z}, Point{w}), lv.value) < 1e-10);
        }
}

TEST_CASE("annulus kernel is invariant under z -> rho / conj(z) up to the jacobian") {
    // The inversion z -> rho / z maps the annulus onto itself; the kernel
    // transforms as K(f z, f w) f'(z) conj(f'(w)) = K(z, w).
    const double rho = 0.45;
    KernelEvaluator eval(Annulus{rho});
    const cplx z{0.6, 0.3};
    const cplx w{-0.2, 0.7};
    auto f = [&](cplx x) { return rho / x; };
    auto df = [&](cplx x) { return -rho / (x * x); };
    const cplx lhs = eval(Point{f(z)}, Point{f(w)}) * df(z) * std::conj(df(w));
    CHECK(rel(lhs, eval(Point{z}, Point{w})) < 1e-10);
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(validate(Disk{-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Annulus{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Polydisk{0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(Ball{0}), std::invalid_argument);
    CHECK(contains(Annulus{0.5}, Point{cplx{0.7, 0.0}}));
    CHECK_FALSE(contains(Annulus{0.5}, Point{cplx{0.3, 0.0}}));
    CHECK_FALSE(contains(Ball{2}, Point{cplx{0.8, 0.0}, cplx{0.0, 0.7}}));
    CHECK(contains(Polydisk{2}, Point{cplx{0.8, 0.0}, cplx{0.0, 0.7}}));
    CHECK_THROWS_AS(eval_kernel(Disk{0.0}, Point{cplx{1.2, 0.0}}, Point{0.0}), DomainError);
    CHECK(weight(Disk{1.0}, Point{cplx{0.5, 0.0}}) == doctest::Approx(2.0 * 0.75));
}

TEST_CASE("reproducing property on the annulus by quadrature") {
    const double rho = 0.5;
    // 100 radial midpoint rings over (rho, 1); the angular rule is exact for
    // these integrands.
    const int rings = 100;
    const int angles = 256;
    KernelEvaluator eval(Annulus{rho});
    const cplx z = std::polar(0.72, 0.4);
    for (int n : {-1, 0, 1}) {
        cplx s = 0.0;
        const double h = (1.0 - rho) / rings;
        for (int i = 0; i < rings; ++i) {
            const double r = rho + (i + 0.5) * h;
            for (int j = 0; j < angles; ++j) {
                const cplx w = std::polar(r, 2.0 * pi * (j + 0.5) / angles);
                s += eval(Point{z}, Point{w}) * std::pow(w, n) * r * h * (2.0 * pi / angles);
            }
        }
        CHECK(std::abs(s - std::pow(z, n)) <= 1e-4 * std::abs(std::pow(z, n)));
    }
}

TEST_CASE("gram matrices of the kernel are positive semidefinite") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (const DomainSpec& spec : {DomainSpec{Disk{0.7}}, DomainSpec{Annulus{0.3}}, DomainSpec{Polydisk{2}},
                                   DomainSpec{Ball{2}}}) {
        const std::size_t d = dimension(spec);
        std::vector<Point> pts;
        while (pts.size() < 6) {
            Point p;
            for (std::size_t j = 0; j < d; ++j) p.coords.push_back({u(gen), u(gen)});
            if (contains(spec, p)) pts.push_back(p);
        }
        KernelEvaluator eval(spec);
        ComplexMatrix g(6, 6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) g(i, j) = eval(pts[i], pts[j]);
        CHECK(hermitian_eigvals(g).front() >= -1e-10 * g.max_abs());
    }
}

TEST_CASE("truncated disk kernel increases to the full kernel on the diagonal") {
    const double alpha = 0.5;
    const cplx z{0.3, 0.4};
    CHECK(rel(disk_basis_kernel(0.0, 1, z, cplx{-0.2, 0.1}), 1.0 / pi) < 1e-14);
    double prev = 0.0;
    for (std::size_t n = 1; n <= 60; ++n) {
        const double v = disk_basis_kernel(alpha, n, z, z).real();
        // Terms fall below rounding once |z|^(2n) is tiny, so only early steps are strict.
        if (n <= 15) CHECK(v > prev);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev <= eval_kernel(Disk{alpha}, Point{z}, Point{z}).real());
    CHECK(rel(disk_basis_kernel(alpha, 400, z, z), eval_kernel(Disk{alpha}, Point{z}, Point{z})) < 1e-12);
}

TEST_CASE("ball volume by monte carlo") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t d = 2;
    const int n = 400000;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 2 * d; ++j) {
            const double x = u(gen);
            s += x * x;
        }
        if (s < 1.0) ++inside;
    }
    const double est = 16.0 * inside / n;
    CHECK(est == doctest::Approx(ball_volume(d)).epsilon(0.01));
}
