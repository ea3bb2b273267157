#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bergman/dpp.hpp"
#include "bergman/errors.hpp"
#include "support.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <bit>
#include <cmath>
#include <map>

using namespace bergman;

namespace {

// Pearson chi-square p-value of observed counts against a pmf, pooling all
// cells with expected count below 5 into one.
double chi_square_pvalue(const std::vector<double>& pmf, const std::vector<std::size_t>& counts, std::size_t n) {
    double stat = 0.0;
    double pooled_e = 0.0;
    double pooled_o = 0.0;
    std::size_t cells = 0;
    for (std::size_t a = 0; a < pmf.size(); ++a) {
        const double e = pmf[a] * double(n);
        if (e < 5.0) {
            pooled_e += e;
            pooled_o += double(counts[a]);
            continue;
        }
        stat += (counts[a] - e) * (counts[a] - e) / e;
        ++cells;
    }
    if (pooled_e > 0.0) {
        stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
        ++cells;
    }
    boost::math::chi_squared dist(double(cells - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

std::vector<std::size_t> bits(Mask a) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 32; ++i)
        if ((a >> i) & 1u) out.push_back(i);
    return out;
}

} // namespace

TEST_CASE("configurations and masks") {
    const Configuration c = make_configuration({5, 1, 3}, 6);
    CHECK(c.indices == std::vector<std::size_t>{1, 3, 5});
    CHECK(to_mask(c) == 0b101010u);
    CHECK(from_mask(0b101010u, 6) == c);
    CHECK(c.contains(3));
    CHECK_FALSE(c.contains(2));
    CHECK_THROWS(make_configuration({1, 1}, 4));
    CHECK_THROWS(make_configuration({4}, 4));
}

TEST_CASE("exact law matches the determinant oracle") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const DppKernel k = random_contraction(6, RngSeed{seed, 0});
        const ConfigPmf pmf = exact_distribution(k);
        const auto ref = testing::pmf_oracle(k.matrix);
        CHECK(testing::max_abs_diff(pmf.mass, ref) < 1e-12);
        CHECK(pmf.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const DppKernel p = random_projection(6, 3, RngSeed{seed, 9});
        CHECK(p.projection);
        const ConfigPmf pmf = exact_distribution(p);
        CHECK(testing::max_abs_diff(pmf.mass, testing::pmf_oracle(p.matrix)) < 1e-11);
        for (Mask a = 0; a < pmf.mass.size(); ++a)
            if (std::popcount(a) != 3) CHECK(std::abs(pmf.mass[a]) < 1e-12);
    }
}

TEST_CASE("inclusion probabilities are principal minors") {
    const DppKernel k = random_contraction(5, RngSeed{11, 0});
    const ConfigPmf pmf = exact_distribution(k);
    for (Mask b = 0; b < 32; ++b) {
        double incl = 0.0;
        for (Mask a = 0; a < 32; ++a)
            if ((a & b) == b) incl += pmf.mass[a];
        const auto idx = bits(b);
        const double minor = testing::naive_det(testing::to_dense(k.matrix.principal(idx))).real();
        CHECK(incl == doctest::Approx(minor).epsilon(1e-10));
        CHECK(correlation(k, from_mask(b, 5)) == doctest::Approx(minor).epsilon(1e-10));
    }
}

TEST_CASE("gap probability against enumeration") {
    const DppKernel k = random_contraction(10, RngSeed{3, 1});
    const auto pmf = testing::pmf_oracle(k.matrix);
    for (Mask b : {0b1u, 0b1011u, 0b1111100000u, 0b1111111111u, 0u}) {
        double empty = 0.0;
        for (Mask a = 0; a < pmf.size(); ++a)
            if ((a & b) == 0) empty += pmf[a];
        const auto idx = bits(b);
        CHECK(std::abs(gap_probability(k, idx) - empty) <= 1e-9);
    }
    CHECK(gap_probability(make_kernel(ComplexMatrix(3, 3)), std::vector<std::size_t>{0, 1, 2}) == 1.0);
}

TEST_CASE("gap probability against monte carlo") {
    const DppKernel k = random_contraction(8, RngSeed{21, 0});
    const std::vector<std::size_t> b{0, 2, 5};
    const double p = gap_probability(k, b);
    const Sampler s(k);
    const std::size_t n = 10000;
    std::size_t empty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Configuration c = s.sample(RngSeed{5, 0}.split(i));
        if (!c.contains(0) && !c.contains(2) && !c.contains(5)) ++empty;
    }
    const double sigma = std::sqrt(p * (1.0 - p) / double(n));
    CHECK(std::abs(double(empty) / double(n) - p) <= 3.0 * sigma);
}

TEST_CASE("poisson binomial against enumeration") {
    const std::vector<double> p{0.1, 0.7, 0.35, 0.5, 0.92, 0.0, 1.0};
    const auto pb = poisson_binomial(p);
    std::vector<double> ref(p.size() + 1, 0.0);
    for (std::size_t a = 0; a < (1u << p.size()); ++a) {
        double w = 1.0;
        for (std::size_t i = 0; i < p.size(); ++i) w *= ((a >> i) & 1u) ? p[i] : 1.0 - p[i];
        ref[std::popcount(a)] += w;
    }
    CHECK(testing::max_abs_diff(pb, ref) < 1e-15);
    CHECK(poisson_binomial(std::vector<double>{}) == std::vector<double>{1.0});
}

TEST_CASE("number distribution is the law of the count") {
    const DppKernel k = random_contraction(7, RngSeed{8, 2});
    const ConfigPmf pmf = exact_distribution(k);
    std::vector<double> counts(8, 0.0);
    for (Mask a = 0; a < pmf.mass.size(); ++a) counts[std::popcount(a)] += pmf.mass[a];
    CHECK(testing::max_abs_diff(number_distribution(k), counts) < 1e-12);
}

TEST_CASE("sampler frequencies pass a chi-square test") {
    const std::size_t n = 200000;
    for (bool proj : {false, true}) {
        const DppKernel k = proj ? random_projection(6, 3, RngSeed{4, 4}) : random_contraction(6, RngSeed{4, 4});
        const auto ref = testing::pmf_oracle(k.matrix);
        const Sampler s(k);
        std::vector<std::size_t> counts(64, 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[to_mask(s.sample(RngSeed{99, 0}.split(i)))];
        const double pv = chi_square_pvalue(ref, counts, n);
        MESSAGE("chi-square p-value (projection=" << proj << "): " << pv);
        CHECK(pv > 0.001);
    }
}

TEST_CASE("sampling edge cases and determinism") {
    const Sampler zero(make_kernel(ComplexMatrix(5, 5)));
    const Sampler full(make_kernel(ComplexMatrix::identity(4), true));
    for (std::uint64_t i = 0; i < 20; ++i) {
        CHECK(zero.sample(RngSeed{1, i}).empty());
        CHECK(full.sample(RngSeed{1, i}).size() == 4);
    }
    const DppKernel k = random_contraction(9, RngSeed{2, 0});
    CHECK(sample(k, RngSeed{3, 4}) == sample(k, RngSeed{3, 4}));
    const DppKernel p = random_projection(9, 4, RngSeed{2, 1});
    for (std::uint64_t i = 0; i < 20; ++i) CHECK(sample(p, RngSeed{7, i}).size() == 4);
}

TEST_CASE("seed splitting") {
    const RngSeed s{42, 0};
    CHECK(s.split(1) == s.split(1));
    CHECK_FALSE(s.split(1) == s.split(2));
    CounterRng a(s.split(3));
    CounterRng b(s.split(3));
    for (int i = 0; i < 10; ++i) CHECK(a() == b());
    CounterRng u(s);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) mean += u.uniform();
    CHECK(mean / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("random kernels and contracts") {
    const DppKernel k = random_contraction(8, RngSeed{1, 1}, 0.2, 0.6);
    const auto vals = hermitian_eigvals(k.matrix);
    CHECK(vals.front() >= 0.2 - 1e-12);
    CHECK(vals.back() <= 0.6 + 1e-12);
    CHECK_THROWS_AS(exact_distribution(make_kernel(ComplexMatrix(13, 13))), ContractViolation);
    // An eigenvalue at 1 without the projection flag has no L-ensemble.
    CHECK_THROWS_AS(exact_distribution(make_kernel(ComplexMatrix::identity(2))), ContractViolation);
}
