#pragma once

#include "bergman/dpp.hpp"
#include "bergman/palm.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bergman {

inline constexpr double kResolventFloor = 1e-10;
inline constexpr double kProbeThreshold = 1e-9;

struct ConditionalResult {
    DppKernel kernel;             // on the sites of W, in the order given
    std::vector<double> spectrum; // ascending eigenvalues of `kernel`
};

// Kernel of the process on W given the configuration `exterior` outside W:
//   K^[X, W^c] = chi_W K^p (I - chi_{W^c} K^p)^-1 chi_W,  p = exterior,
// assembled as K^p_WW + K^p_WC (I - K^p_CC)^-1 K^p_CW with C = W^c.
// Throws DegenerateGeometryError if the resolvent is singular and
// UndefinedPalmError if a Schur pivot on the exterior falls to 1e-12 or below.
ConditionalResult conditional_kernel_with_spectrum(const DppKernel& k, std::span<const std::size_t> window,
                                                   const Configuration& exterior);
DppKernel conditional_kernel(const DppKernel& k, std::span<const std::size_t> window, const Configuration& exterior);

// Brute force: condition the exact law on {A : A \ W = exterior} and keep
// A n W. Indexed by bitmask over the full ground set.
ConfigPmf conditional_oracle(const DppKernel& k, std::span<const std::size_t> window, const Configuration& exterior);

// Moves a pmf over the |W| local sites of a window onto the full ground set.
ConfigPmf embed(const ConfigPmf& local, std::span<const std::size_t> window, std::size_t ground_size);

// P(X = A | #X = n) for the DPP of `kcond`, from the exact law.
double diffusive_density(const DppKernel& kcond, std::size_t n, const Configuration& a);

struct TraceStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct ProbeReport {
    std::string probe;
    std::size_t samples = 0;
    double min_gap = 1.0;          // min over samples of det(I - Kcond)
    double max_lambda = 0.0;       // max over samples of the top eigenvalue of Kcond
    double min_insertion = 1.0;    // min over samples of 1 - det(I - Kcond)
    TraceStats trace_stats;        // of trace(Kcond)
    std::size_t degenerate_events = 0; // singular resolvent or undefined Palm
    bool pass = false;
    RngSeed seed;
};

// For each sampled X: Kcond = K^[X, B^c]; PASS iff every conditional gap is
// positive and every top eigenvalue is below 1 - 1e-9.
ProbeReport deletion_tolerance_probe(const DppKernel& k, std::span<const std::size_t> b, std::size_t samples,
                                     RngSeed seed, std::size_t threads = 1);

// Same conditioning; PASS iff trace(Kcond) > 1e-9 on every sample.
ProbeReport number_insertion_probe(const DppKernel& k, std::span<const std::size_t> b, std::size_t samples,
                                   RngSeed seed, std::size_t threads = 1);

} // namespace bergman
