#pragma once

#include "bergman/dpp.hpp"

#include <cstddef>
#include <vector>

namespace bergman {

// Distinct positions p_1..p_l at which the process is pinned.
struct PalmTuple {
    std::vector<std::size_t> indices;
};

inline constexpr double kPalmPivotFloor = 1e-12;

// In place: K <- K - K(., p) K(p, .) / K(p, p). Row and column p become
// exactly zero. Throws UndefinedPalmError when K(p, p) <= 1e-12.
void schur_eliminate(ComplexMatrix& k, std::size_t p);

// One-point reduced Palm kernel.
DppKernel palm_schur(const DppKernel& k, std::size_t p);

// Throws on repeated or out-of-range indices and on a correlation
// det K_p <= 1e-12 (the Palm measure is undefined there).
void validate_palm_tuple(const DppKernel& k, const PalmTuple& p);

// Entry (x, y) of the l-point Palm kernel as a ratio of a bordered
// (l+1)x(l+1) determinant over the l x l minor at the tuple. Cross-check
// for palm_kernel only.
cplx palm_ratio(const DppKernel& k, const PalmTuple& p, std::size_t x, std::size_t y);

// Iterated one-point Schur complements over the tuple.
DppKernel palm_kernel(const DppKernel& k, const PalmTuple& p);

// Brute force: condition the exact law on {A contains p}, then delete p.
// Indexed by bitmask over the full ground set (bits of p are never set).
ConfigPmf palm_distribution_oracle(const DppKernel& k, const PalmTuple& p);

} // namespace bergman
