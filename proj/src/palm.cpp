#include "bergman/palm.hpp"

#include "bergman/errors.hpp"
#include "bergman/simd.hpp"

#include <algorithm>
#include <string>

namespace bergman {

void schur_eliminate(ComplexMatrix& k, std::size_t p) {
    const std::size_t m = k.rows();
    if (p >= m) throw std::out_of_range("palm: position outside the ground set");
    const double pivot = k(p, p).real();
    if (!(pivot > kPalmPivotFloor))
        throw UndefinedPalmError("palm: K(p, p) = " + std::to_string(pivot) + " is below the pivot floor at p = " +
                                 std::to_string(p));
    const std::vector<cplx> prow(k.row(p).begin(), k.row(p).end());
    for (std::size_t i = 0; i < m; ++i) {
        if (i == p) continue;
        const cplx kip = k(i, p);
        if (kip == cplx{0.0, 0.0}) continue;
        simd::axpy(m, -kip / pivot, prow.data(), k.row(i).data());
    }
    for (std::size_t j = 0; j < m; ++j) {
        k(p, j) = 0.0;
        k(j, p) = 0.0;
    }
    for (std::size_t i = 0; i < m; ++i) k(i, i) = k(i, i).real();
}

DppKernel palm_schur(const DppKernel& k, std::size_t p) {
    DppKernel out = k;
    out.clamp_moved = 0.0;
    schur_eliminate(out.matrix, p);
    return out;
}

void validate_palm_tuple(const DppKernel& k, const PalmTuple& p) {
    std::vector<std::size_t> sorted = p.indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("palm: tuple positions must be distinct");
    if (!sorted.empty() && sorted.back() >= k.size()) throw std::out_of_range("palm: position outside the ground set");
    const double rho = correlation(k, Configuration{sorted});
    if (!(rho > kPalmPivotFloor))
        throw UndefinedPalmError("palm: correlation at the tuple is " + std::to_string(rho) + ", Palm measure undefined");
}

cplx palm_ratio(const DppKernel& k, const PalmTuple& p, std::size_t x, std::size_t y) {
    if (x >= k.size() || y >= k.size()) throw std::out_of_range("palm_ratio: index outside the ground set");
    ComplexMatrix minor = k.matrix.principal(p.indices);
    const cplx den = det(minor);
    if (!(std::abs(den) > kPalmPivotFloor)) throw SingularMatrixError("palm_ratio: singular minor at the tuple", INFINITY);

    // Rows (x, p_1..p_l), columns (y, p_1..p_l).
    std::vector<std::size_t> rows{x}, cols{y};
    rows.insert(rows.end(), p.indices.begin(), p.indices.end());
    cols.insert(cols.end(), p.indices.begin(), p.indices.end());
    ComplexMatrix bordered = k.matrix.block(rows, cols);
    return det(bordered) / den;
}

DppKernel palm_kernel(const DppKernel& k, const PalmTuple& p) {
    validate_palm_tuple(k, p);
    DppKernel out = k;
    out.clamp_moved = 0.0;
    for (std::size_t idx : p.indices) schur_eliminate(out.matrix, idx);
    return out;
}

ConfigPmf palm_distribution_oracle(const DppKernel& k, const PalmTuple& p) {
    validate_palm_tuple(k, p);
    const ConfigPmf joint = exact_distribution(k);
    const Mask pm = to_mask(Configuration{p.indices});
    double total = 0.0;
    for (Mask a = 0; a < joint.mass.size(); ++a)
        if ((a & pm) == pm) total += joint.mass[a];
    if (!(total > 1e-12)) throw ZeroProbabilityError("palm_distribution_oracle: P(tuple present) is below 1e-12");
    ConfigPmf out{joint.ground, std::vector<double>(joint.mass.size(), 0.0)};
    for (Mask a = 0; a < joint.mass.size(); ++a)
        if ((a & pm) == pm) out.mass[a & ~pm] += joint.mass[a] / total;
    return out;
}

} // namespace bergman
