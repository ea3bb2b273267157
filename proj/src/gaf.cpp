#include "bergman/gaf.hpp"

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace bergman::gaf {

std::vector<cplx> sample_gaf(std::size_t n_coeffs, RngSeed seed) {
    if (n_coeffs < 2) throw std::invalid_argument("sample_gaf: need at least two coefficients");
    CounterRng rng(seed);
    std::vector<cplx> c(n_coeffs);
    for (cplx& v : c) v = rng.complex_normal();
    return c;
}

namespace {

struct Evaluation {
    cplx ratio;     // p(z) / p'(z)
    double scaled;  // |p(z)| / max(1, |z|)^deg
};

Evaluation evaluate(std::span<const cplx> c, cplx z) {
    const std::size_t n = c.size() - 1;
    if (std::abs(z) <= 1.0) {
        cplx p = c[n], dp = 0.0;
        for (std::size_t k = n; k-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        return {p / dp, std::abs(p)};
    }
    // p(z) = z^n q(w), q(w) = sum c_k w^(n-k), w = 1/z.
    const cplx w = 1.0 / z;
    cplx q = c[0], dq = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        dq = dq * w + q;
        q = q * w + c[k];
    }
    // p'(z) = z^(n-1) (n q(w) - w q'(w))
    const cplx denom = static_cast<double>(n) * q - w * dq;
    return {z * q / denom, std::abs(q)};
}

} // namespace

RootResult roots(std::span<const cplx> coeffs) {
    std::size_t end = coeffs.size();
    while (end > 0 && std::abs(coeffs[end - 1]) <= 1e-300) --end;
    if (end < 2) throw std::invalid_argument("roots: polynomial has no roots (degree < 1)");
    const std::span<const cplx> c = coeffs.first(end);
    const std::size_t n = end - 1;
    double cmax = 0.0;
    for (const cplx& v : c) cmax = std::max(cmax, std::abs(v));

    RootResult out;
    out.roots.resize(n);
    // Starting circle at the geometric mean of the root moduli (zero roots at
    // the origin are recovered by the iteration itself).
    double r0 = std::abs(c[0]) > 0.0 ? std::pow(std::abs(c[0]) / std::abs(c[n]), 1.0 / static_cast<double>(n)) : 0.5;
    if (!(r0 > 0.0) || !std::isfinite(r0)) r0 = 1.0;
    for (std::size_t k = 0; k < n; ++k)
        out.roots[k] = std::polar(r0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4);

    std::vector<bool> done(n, false);
    std::size_t remaining = n;
    for (int iter = 0; iter < 500 && remaining > 0; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const cplx zi = out.roots[i];
            const Evaluation e = evaluate(c, zi);
            if (e.scaled == 0.0) {
                done[i] = true;
                --remaining;
                continue;
            }
            cplx sum = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (zi - out.roots[j]);
            const cplx step = e.ratio / (1.0 - e.ratio * sum);
            out.roots[i] = zi - step;
            if (std::abs(step) <= 1e-15 * std::max(std::abs(zi), 1e-3) || !std::isfinite(std::abs(step))) {
                done[i] = true;
                --remaining;
            }
        }
    }
    out.converged = remaining == 0;

    out.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int s = 0; s < 2; ++s) {
            const Evaluation e = evaluate(c, out.roots[i]);
            if (e.scaled == 0.0 || !std::isfinite(std::abs(e.ratio))) break;
            const cplx next = out.roots[i] - e.ratio;
            if (evaluate(c, next).scaled <= e.scaled) out.roots[i] = next;
        }
        out.residuals[i] = evaluate(c, out.roots[i]).scaled / cmax;
        out.max_residual = std::max(out.max_residual, out.residuals[i]);
    }
    return out;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double expected_zero_count(double r0, double r1) {
    if (!(0.0 <= r0 && r0 <= r1 && r1 < 1.0)) throw std::invalid_argument("expected_zero_count: need 0 <= r0 <= r1 < 1");
    if (r0 == r1) return 0.0;
    const std::function<double(double)> f = [](double r) {
        const double s = 1.0 - r * r;
        return 2.0 * r / (s * s);
    };
    const double fa = f(r0), fb = f(r1), fm = f(0.5 * (r0 + r1));
    const double whole = (r1 - r0) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, r0, r1, fa, fm, fb, whole, 1e-13, 40);
}

IntensityReport intensity_compare(std::size_t n_coeffs, double radius, std::size_t bins, std::size_t trials,
                                  RngSeed seed, std::size_t threads) {
    if (n_coeffs < 60) throw std::invalid_argument("intensity_compare: need at least 60 coefficients");
    if (!(radius > 0.0 && radius <= 0.8)) throw std::invalid_argument("intensity_compare: radius must lie in (0, 0.8]");
    if (bins < 1 || trials < 2) throw std::invalid_argument("intensity_compare: need bins >= 1 and trials >= 2");
    constexpr double kHalf = 0.5;

    struct Trial {
        bool excluded = false;
        std::vector<double> counts; // bins..., then |z| < 0.5
        std::vector<cplx> zeros;
    };
    std::vector<Trial> results(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const auto c = sample_gaf(n_coeffs, seed.split(t));
        const RootResult r = roots(c);
        Trial& out = results[t];
        if (!r.converged || r.max_residual > kResidualTolerance) {
            out.excluded = true;
            return;
        }
        out.counts.assign(bins + 1, 0.0);
        if (t < 8) out.zeros = r.roots;
        for (const cplx& z : r.roots) {
            const double a = std::abs(z);
            if (a < radius) {
                const std::size_t b = std::min(bins - 1, static_cast<std::size_t>(a / radius * static_cast<double>(bins)));
                out.counts[b] += 1.0;
            }
            if (a < kHalf) out.counts[bins] += 1.0;
        }
    });

    IntensityReport rep;
    rep.degree_terms = n_coeffs;
    rep.radius = radius;
    rep.trials = trials;
    rep.seed = seed;
    std::vector<double> sum(bins + 1, 0.0), sq(bins + 1, 0.0);
    std::size_t used = 0;
    for (const Trial& t : results) {
        if (t.excluded) {
            ++rep.excluded;
            continue;
        }
        if (used == 0) rep.example_zeros = t.zeros;
        ++used;
        for (std::size_t b = 0; b <= bins; ++b) {
            sum[b] += t.counts[b];
            sq[b] += t.counts[b] * t.counts[b];
        }
    }
    const double n = static_cast<double>(used);
    auto stat = [&](std::size_t b, double lo, double hi) {
        BinStat s;
        s.lo = lo;
        s.hi = hi;
        s.expected = expected_zero_count(lo, hi);
        s.observed_mean = used > 0 ? sum[b] / n : 0.0;
        const double var = used > 1 ? std::max(0.0, (sq[b] - n * s.observed_mean * s.observed_mean) / (n - 1.0)) : 0.0;
        const double se = std::sqrt(var / std::max(n, 1.0));
        s.z_score = se > 0.0 ? (s.observed_mean - s.expected) / se : (s.observed_mean == s.expected ? 0.0 : INFINITY);
        return s;
    };
    bool ok = used > 0 && static_cast<double>(rep.excluded) < 0.01 * static_cast<double>(trials);
    for (std::size_t b = 0; b < bins; ++b) {
        const double lo = radius * static_cast<double>(b) / static_cast<double>(bins);
        const double hi = radius * static_cast<double>(b + 1) / static_cast<double>(bins);
        rep.bins.push_back(stat(b, lo, hi));
        ok = ok && std::abs(rep.bins.back().z_score) <= 4.0;
    }
    rep.half_disk = stat(bins, 0.0, kHalf);
    ok = ok && std::abs(rep.half_disk.z_score) <= 3.0;
    rep.pass = ok;
    return rep;
}

} // namespace bergman::gaf
