#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bergman/coupling.hpp"
#include "bergman/errors.hpp"

#include <bit>
#include <cmath>

using namespace bergman;

namespace {

ConfigPmf bernoulli(double p) { return ConfigPmf{1, {1.0 - p, p}}; }

double mass_of(const CouplingTable& t, Mask upper, Mask lower) {
    for (const auto& e : t.entries)
        if (e.upper == upper && e.lower == lower) return e.mass;
    return 0.0;
}

// Probability of the up-closure of a list of masks.
double up_set_mass(const ConfigPmf& pmf, const std::vector<unsigned>& gens) {
    double s = 0.0;
    for (Mask a = 0; a < pmf.mass.size(); ++a)
        for (unsigned g : gens)
            if ((a & g) == g) {
                s += pmf.mass[a];
                break;
            }
    return s;
}

} // namespace

TEST_CASE("single site closed form") {
    const CouplingTable t = monotone_coupling(bernoulli(0.7), bernoulli(0.3));
    CHECK(mass_of(t, 1, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(mass_of(t, 1, 0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(mass_of(t, 0, 0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(mass_of(t, 0, 1) == 0.0);
    CHECK(coupling_defect(t, bernoulli(0.7), bernoulli(0.3)) < 1e-12);
}

TEST_CASE("a law couples with itself") {
    const DppKernel k = random_contraction(5, RngSeed{3, 3});
    const ConfigPmf p = exact_distribution(k);
    const CouplingTable t = monotone_coupling(p, p);
    CHECK(coupling_defect(t, p, p) < 1e-9);
    for (const auto& e : t.entries) CHECK((e.lower & ~e.upper) == 0u);
}

TEST_CASE("infeasibility carries a genuine certificate") {
    // Lower puts more mass on {site 0} than upper.
    const ConfigPmf upper = bernoulli(0.3);
    const ConfigPmf lower = bernoulli(0.7);
    try {
        monotone_coupling(upper, lower);
        FAIL("expected DominationViolated");
    } catch (const DominationViolated& e) {
        CHECK(e.excess() > 1e-9);
        const double excess = up_set_mass(lower, e.up_set()) - up_set_mass(upper, e.up_set());
        CHECK(excess > 1e-9);
    }

    // Two sites: same one-point marginals but the lower law concentrates on
    // {0, 1}; the up-set {0, 1} is violated.
    const ConfigPmf u2{2, {0.0, 0.5, 0.5, 0.0}};
    const ConfigPmf l2{2, {0.5, 0.0, 0.0, 0.5}};
    try {
        monotone_coupling(u2, l2);
        FAIL("expected DominationViolated");
    } catch (const DominationViolated& e) {
        CHECK(up_set_mass(l2, e.up_set()) - up_set_mass(u2, e.up_set()) > 1e-9);
    }
}

TEST_CASE("a dpp dominates its palm measure") {
    std::size_t feasible = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DppKernel k = random_contraction(5, RngSeed{seed, 500});
        const PalmTuple p{{seed % 5}};
        const ConfigPmf upper = exact_distribution(k);
        const ConfigPmf lower = exact_distribution(palm_kernel(k, p));
        const CouplingTable t = monotone_coupling(upper, lower);
        CHECK(coupling_defect(t, upper, lower) <= 1e-9);
        ++feasible;
        const TraceBoundReport tb = difference_trace_bound(k, p, t);
        CHECK(tb.identity_error <= 1e-9);
        CHECK(tb.expected_difference <= tb.trace_difference + 1e-9);
        CHECK(tb.pass);
    }
    CHECK(feasible == 20);
}

TEST_CASE("trace bound on a projection drops exactly one point") {
    const DppKernel k = random_projection(6, 3, RngSeed{1, 2});
    const PalmTuple p{{2}};
    const ConfigPmf upper = exact_distribution(k);
    const ConfigPmf lower = exact_distribution(palm_kernel(k, p));
    const TraceBoundReport tb = difference_trace_bound(k, p, monotone_coupling(upper, lower));
    CHECK(tb.expected_difference == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(tb.trace_difference == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("domination check") {
    const DppKernel k = random_contraction(6, RngSeed{4, 1});
    const DominationReport same = domination_check(k, k, 2000, RngSeed{1, 1});
    CHECK(same.pass);
    CHECK(same.exact);
    for (std::size_t i = 0; i < same.set_sizes.size(); ++i)
        CHECK(same.upper_mean[i] == doctest::Approx(same.lower_mean[i]).epsilon(1e-12));

    const DominationReport palm = domination_check(k, palm_kernel(k, PalmTuple{{1}}), 2000, RngSeed{1, 2});
    CHECK(palm.pass);
    CHECK(palm.trace_lower <= palm.trace_upper);
    CHECK(palm.worst_event_excess <= 1e-9);
    CHECK(palm.events_checked > 0);

    // Reversed roles must be caught.
    const DominationReport rev = domination_check(palm_kernel(k, PalmTuple{{1}}), k, 2000, RngSeed{1, 3});
    CHECK_FALSE(rev.pass);
}
