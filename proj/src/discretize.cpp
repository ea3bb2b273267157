#include "bergman/discretize.hpp"

#include "bergman/errors.hpp"
#include "bergman/linalg.hpp"
#include "bergman/simd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bergman {
namespace {

constexpr double kPi = std::numbers::pi;

struct PolarCell {
    cplx z;
    double area;
};

// Midpoint polar cells covering r_lo <= |z| <= r_hi.
std::vector<PolarCell> polar_cells(double r_lo, double r_hi, std::size_t resolution) {
    const std::size_t rings = std::max<std::size_t>(1, resolution / 2);
    const std::size_t angles = 2 * resolution;
    const double dr = (r_hi - r_lo) / static_cast<double>(rings);
    const double dtheta = 2.0 * kPi / static_cast<double>(angles);
    std::vector<PolarCell> cells;
    cells.reserve(rings * angles);
    for (std::size_t k = 0; k < rings; ++k) {
        const double a = r_lo + dr * static_cast<double>(k);
        const double b = a + dr;
        const double r = 0.5 * (a + b);
        const double area = 0.5 * dtheta * (b * b - a * a);
        for (std::size_t j = 0; j < angles; ++j) {
            const double theta = dtheta * (static_cast<double>(j) + 0.5);
            cells.push_back({std::polar(r, theta), area});
        }
    }
    return cells;
}

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

void append_ball(Grid& g, std::size_t d, double radius, std::size_t resolution) {
    const std::size_t shells = std::max<std::size_t>(1, resolution / 2);
    const std::size_t simplex_steps = std::max<std::size_t>(1, resolution / 2);
    const std::size_t angles = 2 * resolution;
    const double vol = ball_volume(d);
    const double dtheta = 2.0 * kPi / static_cast<double>(angles);

    // Simplex directions via stick-breaking x in [0,1]^(d-1); the weight of a
    // cell is its share of the uniform measure on the simplex.
    struct Direction {
        std::vector<double> sigma;
        double weight;
    };
    std::vector<Direction> dirs;
    const std::size_t free_dims = d - 1;
    std::size_t combos = 1;
    for (std::size_t l = 0; l < free_dims; ++l) combos *= simplex_steps;
    const double h = 1.0 / static_cast<double>(simplex_steps);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        std::vector<double> sigma(d);
        double remaining = 1.0;
        double w = factorial(free_dims);
        for (std::size_t l = 0; l < free_dims; ++l) {
            const std::size_t cell = rest % simplex_steps;
            rest /= simplex_steps;
            const double a = h * static_cast<double>(cell);
            const double b = a + h;
            const double x = 0.5 * (a + b);
            const double e = static_cast<double>(d - 1 - l); // exponent + 1 of (1 - x)
            w *= (std::pow(1.0 - a, e) - std::pow(1.0 - b, e)) / e;
            sigma[l] = remaining * x;
            remaining *= 1.0 - x;
        }
        sigma[d - 1] = remaining;
        dirs.push_back({std::move(sigma), w});
    }

    std::size_t torus = 1;
    for (std::size_t j = 0; j < d; ++j) torus *= angles;
    const double torus_weight = 1.0 / static_cast<double>(torus);

    for (std::size_t s = 0; s < shells; ++s) {
        const double a = radius * static_cast<double>(s) / static_cast<double>(shells);
        const double b = radius * static_cast<double>(s + 1) / static_cast<double>(shells);
        const double r = 0.5 * (a + b);
        const double shell = vol * (std::pow(b, 2.0 * static_cast<double>(d)) - std::pow(a, 2.0 * static_cast<double>(d)));
        for (const Direction& dir : dirs) {
            for (std::size_t t = 0; t < torus; ++t) {
                std::size_t rest = t;
                std::vector<cplx> z(d);
                for (std::size_t j = 0; j < d; ++j) {
                    const double theta = dtheta * (static_cast<double>(rest % angles) + 0.5);
                    rest /= angles;
                    z[j] = std::polar(r * std::sqrt(dir.sigma[j]), theta);
                }
                g.points.emplace_back(std::move(z));
                g.quad_weights.push_back(shell * dir.weight * torus_weight);
            }
        }
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace

Grid build_grid(const DomainSpec& spec, std::size_t resolution, double inset) {
    validate(spec);
    if (resolution < 2) throw std::invalid_argument("build_grid: resolution must be >= 2");
    if (!(inset > 0.0 && inset < 1.0)) throw std::invalid_argument("build_grid: inset must lie in (0, 1)");

    Grid g;
    g.spec = spec;
    std::visit(overloaded{
                   [&](const Disk&) {
                       for (const auto& c : polar_cells(0.0, 1.0 - inset, resolution)) {
                           g.points.push_back(Point{c.z});
                           g.quad_weights.push_back(c.area);
                       }
                   },
                   [&](const Annulus& a) {
                       const double pad = 0.5 * inset * (1.0 - a.rho);
                       for (const auto& c : polar_cells(a.rho + pad, 1.0 - pad, resolution)) {
                           g.points.push_back(Point{c.z});
                           g.quad_weights.push_back(c.area);
                       }
                   },
                   [&](const Polydisk& p) {
                       const auto cells = polar_cells(0.0, 1.0 - inset, resolution);
                       std::size_t total = 1;
                       for (std::size_t j = 0; j < p.d; ++j) total *= cells.size();
                       for (std::size_t t = 0; t < total; ++t) {
                           std::size_t rest = t;
                           std::vector<cplx> z(p.d);
                           double w = 1.0;
                           for (std::size_t j = 0; j < p.d; ++j) {
                               const auto& c = cells[rest % cells.size()];
                               rest /= cells.size();
                               z[j] = c.z;
                               w *= c.area;
                           }
                           g.points.emplace_back(std::move(z));
                           g.quad_weights.push_back(w);
                       }
                   },
                   [&](const Ball& b) { append_ball(g, b.d, 1.0 - inset, resolution); },
               },
               spec);
    g.weight_values.reserve(g.points.size());
    for (const Point& p : g.points) g.weight_values.push_back(weight(spec, p));
    return g;
}

double grid_region_volume(const DomainSpec& spec, double inset) {
    return std::visit(overloaded{
                          [&](const Disk&) { return kPi * (1.0 - inset) * (1.0 - inset); },
                          [&](const Annulus& a) {
                              const double pad = 0.5 * inset * (1.0 - a.rho);
                              const double hi = 1.0 - pad, lo = a.rho + pad;
                              return kPi * (hi * hi - lo * lo);
                          },
                          [&](const Polydisk& p) {
                              return std::pow(kPi * (1.0 - inset) * (1.0 - inset), static_cast<double>(p.d));
                          },
                          [&](const Ball& b) {
                              return ball_volume(b.d) * std::pow(1.0 - inset, 2.0 * static_cast<double>(b.d));
                          },
                      },
                      spec);
}

DppKernel make_kernel(ComplexMatrix m, bool projection) {
    if (!m.square()) throw std::invalid_argument("make_kernel: matrix is not square");
    m = m.hermitian_part();
    if (m.rows() > 0) {
        const auto ev = hermitian_eigvals(m);
        if (ev.front() < -1e-9 || ev.back() > 1.0 + 1e-9)
            throw ContractViolation("make_kernel: spectrum [" + std::to_string(ev.front()) + ", " +
                                    std::to_string(ev.back()) + "] leaves [0, 1]");
    }
    return DppKernel{std::move(m), projection, std::nullopt, 0.0};
}

DppKernel kernel_matrix(const DomainSpec& spec, const Grid& grid, double clamp_delta) {
    if (grid.points.size() != grid.quad_weights.size() || grid.points.size() != grid.weight_values.size())
        throw std::invalid_argument("kernel_matrix: grid arrays have different lengths");
    if (!(clamp_delta >= 0.0 && clamp_delta < 1.0)) throw std::invalid_argument("kernel_matrix: clamp delta must lie in [0, 1)");
    const KernelEvaluator kernel(spec);
    const std::size_t m = grid.size();
    std::vector<double> root(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(grid.quad_weights[i] > 0.0)) throw std::invalid_argument("kernel_matrix: non-positive quadrature weight");
        root[i] = std::sqrt(grid.measure(i));
    }
    ComplexMatrix raw(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        raw(i, i) = root[i] * root[i] * kernel(grid.points[i], grid.points[i]).real();
        for (std::size_t j = i + 1; j < m; ++j) {
            const cplx v = root[i] * kernel(grid.points[i], grid.points[j]) * root[j];
            raw(i, j) = v;
            raw(j, i) = std::conj(v);
        }
    }
    const double trace = raw.trace().real();
    ClampResult clamped = psd_clamp_report(raw, 0.0, 1.0 - clamp_delta);
    if (clamped.moved > 0.1 * trace)
        throw CoarseGridError("kernel_matrix: clamping moved " + std::to_string(clamped.moved) + " of trace " +
                              std::to_string(trace) + "; refine the grid or increase the inset");
    std::vector<std::size_t> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = i;
    return DppKernel{std::move(clamped.matrix), false, std::move(labels), clamped.moved};
}

namespace {

void require_disk(const Grid& grid, const char* who) {
    if (!std::holds_alternative<Disk>(grid.spec)) throw std::invalid_argument(std::string(who) + ": disk grid required");
}

// Columns sqrt(mu_i) z_i^n, n < N, stored as rows for contiguous access.
std::vector<std::vector<cplx>> sampled_monomials(std::size_t terms, const Grid& grid) {
    std::vector<std::vector<cplx>> rows(terms, std::vector<cplx>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx z = grid.points[i].coords[0];
        cplx zn = std::sqrt(grid.measure(i));
        for (std::size_t n = 0; n < terms; ++n) {
            rows[n][i] = zn;
            zn *= z;
        }
    }
    return rows;
}

} // namespace

ComplexMatrix discrete_monomial_gram(double alpha, std::size_t terms, const Grid& grid) {
    require_disk(grid, "discrete_monomial_gram");
    if (std::get<Disk>(grid.spec).alpha != alpha)
        throw std::invalid_argument("discrete_monomial_gram: alpha differs from the grid's weight");
    const auto v = sampled_monomials(terms, grid);
    ComplexMatrix g(terms, terms);
    for (std::size_t n = 0; n < terms; ++n)
        for (std::size_t k = 0; k < terms; ++k) g(n, k) = simd::dotc(grid.size(), v[n].data(), v[k].data());
    return g;
}

DppKernel basis_projection_kernel(double alpha, std::size_t terms, const Grid& grid) {
    require_disk(grid, "basis_projection_kernel");
    if (std::get<Disk>(grid.spec).alpha != alpha)
        throw std::invalid_argument("basis_projection_kernel: alpha differs from the grid's weight");
    const std::size_t m = grid.size();
    if (terms > m) throw std::invalid_argument("basis_projection_kernel: rank exceeds the grid size");

    auto q = sampled_monomials(terms, grid);
    for (std::size_t n = 0; n < terms; ++n) {
        const double original = std::sqrt(simd::dotc(m, q[n].data(), q[n].data()).real());
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < n; ++k) simd::axpy(m, -simd::dotc(m, q[k].data(), q[n].data()), q[k].data(), q[n].data());
        const double norm = std::sqrt(simd::dotc(m, q[n].data(), q[n].data()).real());
        if (!(norm > 1e-12 * original))
            throw ContractViolation("basis_projection_kernel: monomial " + std::to_string(n) +
                                    " is numerically dependent on lower ones on this grid");
        for (cplx& v : q[n]) v /= norm;
    }
    // P = V V*, P(i, j) = sum_n q_n[i] conj(q_n[j]).
    ComplexMatrix p(m, m);
    for (std::size_t n = 0; n < terms; ++n) {
        std::vector<cplx> conj_row(m);
        for (std::size_t j = 0; j < m; ++j) conj_row[j] = std::conj(q[n][j]);
        for (std::size_t i = 0; i < m; ++i) simd::axpy(m, q[n][i], conj_row.data(), p.row(i).data());
    }
    std::vector<std::size_t> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = i;
    return DppKernel{p.hermitian_part(), true, std::move(labels), 0.0};
}

DppKernel restrict(const DppKernel& k, std::span<const std::size_t> subset) {
    std::vector<std::size_t> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("restrict: subset has repeated indices");
    if (!sorted.empty() && sorted.back() >= k.size()) throw std::out_of_range("restrict: index outside the ground set");
    DppKernel out{k.matrix.principal(subset), false, std::nullopt, 0.0};
    if (subset.size() == k.size()) out.projection = k.projection;
    if (k.labels) {
        std::vector<std::size_t> labels;
        labels.reserve(subset.size());
        for (std::size_t i : subset) labels.push_back((*k.labels)[i]);
        out.labels = std::move(labels);
    }
    return out;
}

} // namespace bergman
