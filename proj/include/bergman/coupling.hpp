#pragma once

#include "bergman/dpp.hpp"
#include "bergman/palm.hpp"

#include <cstddef>
#include <vector>

namespace bergman {

inline constexpr std::size_t kMaxCouplingSites = 8;

struct CouplingEntry {
    Mask upper = 0;
    Mask lower = 0; // always a subset of `upper`
    double mass = 0.0;
};

// Joint law of (A, A') with A' contained in A.
struct CouplingTable {
    std::size_t ground = 0;
    std::vector<CouplingEntry> entries; // sorted by (upper, lower)

    ConfigPmf upper_marginal() const;
    ConfigPmf lower_marginal() const;
    double total() const;
};

// Largest violation among the three table invariants (support, two
// marginals in TV, total mass).
double coupling_defect(const CouplingTable& t, const ConfigPmf& upper, const ConfigPmf& lower);

// Monotone coupling of upper over lower by max-flow on the bipartite graph
// {(A, A') : A' subset of A}. Throws DominationViolated with an up-set U,
// P_lower(U) > P_upper(U), when no coupling exists.
CouplingTable monotone_coupling(const ConfigPmf& upper, const ConfigPmf& lower);

struct DominationReport {
    std::size_t samples = 0;
    bool exact = false;               // exact expectations were available
    std::vector<std::size_t> set_sizes; // nested prefix sets {0..s-1}
    std::vector<double> upper_mean;   // E #(X n S) under the dominating law
    std::vector<double> lower_mean;
    std::vector<double> mc_sigma;     // standard error of the MC difference
    double trace_upper = 0.0;
    double trace_lower = 0.0;
    double worst_event_excess = 0.0;  // max over checked up-sets of P_lower - P_upper
    std::size_t events_checked = 0;
    bool pass = false;
    RngSeed seed;
};

// Checks E_lower f <= E_upper f for counts on nested prefix sets, Monte Carlo
// at 3 sigma plus exact expectations and up-set probabilities when m <= 10
// (up-sets {X contains S} and {X meets S} for every S when m <= 8).
DominationReport domination_check(const DppKernel& k, const DppKernel& kp, std::size_t samples, RngSeed seed);

struct TraceBoundReport {
    double expected_difference = 0.0; // E[#A - #A'] under the coupling
    double trace_difference = 0.0;    // tr(K) - tr(K^p) = tr(K - K^p)
    double identity_error = 0.0;      // |expected_difference - trace_difference|
    bool bound_holds = false;
    bool identity_holds = false;
    bool pass = false;
};

TraceBoundReport difference_trace_bound(const DppKernel& k, const PalmTuple& p, const CouplingTable& coupling);

} // namespace bergman
