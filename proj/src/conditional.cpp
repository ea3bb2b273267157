#include "bergman/conditional.hpp"

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

namespace bergman {
namespace {

std::vector<std::size_t> checked_window(std::span<const std::size_t> window, std::size_t m) {
    std::vector<std::size_t> sorted(window.begin(), window.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("conditional: window has repeated sites");
    if (!sorted.empty() && sorted.back() >= m) throw std::out_of_range("conditional: window site outside the ground set");
    return sorted;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& sorted_window, std::size_t m) {
    std::vector<std::size_t> out;
    out.reserve(m - sorted_window.size());
    for (std::size_t i = 0; i < m; ++i)
        if (!std::binary_search(sorted_window.begin(), sorted_window.end(), i)) out.push_back(i);
    return out;
}

bool looks_like_projection(const std::vector<double>& spectrum) {
    for (double v : spectrum)
        if (std::abs(v) > 1e-9 && std::abs(v - 1.0) > 1e-9) return false;
    return true;
}

} // namespace

ConditionalResult conditional_kernel_with_spectrum(const DppKernel& k, std::span<const std::size_t> window,
                                                   const Configuration& exterior) {
    const std::size_t m = k.size();
    const auto sorted_window = checked_window(window, m);
    for (std::size_t p : exterior.indices) {
        if (p >= m) throw std::out_of_range("conditional: exterior site outside the ground set");
        if (std::binary_search(sorted_window.begin(), sorted_window.end(), p))
            throw std::invalid_argument("conditional: exterior configuration intersects the window");
    }

    // Sampled exteriors routinely have det K_p far below 1e-12 on fine grids
    // (each factor is a cell mass), so only the per-step Schur pivots are
    // checked here, not the tuple's correlation.
    DppKernel kp{k.matrix, k.projection, std::nullopt, 0.0};
    for (std::size_t p : exterior.indices) schur_eliminate(kp.matrix, p);
    const std::vector<std::size_t> w(window.begin(), window.end());
    const auto c = complement(sorted_window, m);

    ComplexMatrix kcond = kp.matrix.principal(w);
    if (!c.empty() && !w.empty()) {
        ComplexMatrix resolvent_arg = ComplexMatrix::identity(c.size()) - kp.matrix.principal(c);
        ComplexMatrix x;
        try {
            x = solve(resolvent_arg, kp.matrix.block(c, w), kResolventFloor);
        } catch (const SingularMatrixError& e) {
            throw DegenerateGeometryError(std::string("conditional: singular resolvent (I - K_CC); ") + e.what());
        }
        kcond += kp.matrix.block(w, c) * x;
    }
    kcond = kcond.hermitian_part();

    std::vector<double> spectrum = w.empty() ? std::vector<double>{} : hermitian_eigvals(kcond);
    if (!spectrum.empty() && (spectrum.front() < -kProbeThreshold || spectrum.back() > 1.0 + kProbeThreshold))
        throw ContractViolation("conditional: spectrum [" + std::to_string(spectrum.front()) + ", " +
                                std::to_string(spectrum.back()) + "] leaves [0, 1]");
    if (!spectrum.empty() && (spectrum.front() < 0.0 || spectrum.back() > 1.0)) {
        kcond = psd_clamp(kcond, 0.0, 1.0);
        for (double& v : spectrum) v = std::clamp(v, 0.0, 1.0);
    }

    DppKernel out{std::move(kcond), looks_like_projection(spectrum), std::nullopt, 0.0};
    if (k.labels) {
        std::vector<std::size_t> labels;
        for (std::size_t i : w) labels.push_back((*k.labels)[i]);
        out.labels = std::move(labels);
    }
    return {std::move(out), std::move(spectrum)};
}

DppKernel conditional_kernel(const DppKernel& k, std::span<const std::size_t> window, const Configuration& exterior) {
    return conditional_kernel_with_spectrum(k, window, exterior).kernel;
}

ConfigPmf conditional_oracle(const DppKernel& k, std::span<const std::size_t> window, const Configuration& exterior) {
    const std::size_t m = k.size();
    const auto sorted_window = checked_window(window, m);
    const ConfigPmf joint = exact_distribution(k);
    const Mask wmask = to_mask(Configuration{sorted_window});
    const Mask ext = to_mask(exterior);
    if (ext & wmask) throw std::invalid_argument("conditional_oracle: exterior configuration intersects the window");

    double total = 0.0;
    for (Mask a = 0; a < joint.mass.size(); ++a)
        if ((a & ~wmask) == ext) total += joint.mass[a];
    if (!(total > 1e-12)) throw ZeroProbabilityError("conditional_oracle: conditioning event has probability below 1e-12");
    ConfigPmf out{m, std::vector<double>(joint.mass.size(), 0.0)};
    for (Mask a = 0; a < joint.mass.size(); ++a)
        if ((a & ~wmask) == ext) out.mass[a & wmask] += joint.mass[a] / total;
    return out;
}

ConfigPmf embed(const ConfigPmf& local, std::span<const std::size_t> window, std::size_t ground_size) {
    if (local.ground != window.size()) throw std::invalid_argument("embed: pmf size does not match the window");
    if (ground_size > kMaxExactSites) throw std::invalid_argument("embed: ground set too large to enumerate");
    ConfigPmf out{ground_size, std::vector<double>(std::size_t{1} << ground_size, 0.0)};
    for (Mask a = 0; a < local.mass.size(); ++a) {
        Mask full = 0;
        for (std::size_t j = 0; j < window.size(); ++j)
            if (a & (Mask{1} << j)) full |= Mask{1} << window[j];
        out.mass[full] += local.mass[a];
    }
    return out;
}

double diffusive_density(const DppKernel& kcond, std::size_t n, const Configuration& a) {
    if (a.size() != n) throw std::invalid_argument("diffusive_density: configuration size differs from n");
    const ConfigPmf pmf = exact_distribution(kcond);
    double level = 0.0;
    for (Mask b = 0; b < pmf.mass.size(); ++b)
        if (static_cast<std::size_t>(std::popcount(b)) == n) level += pmf.mass[b];
    if (!(level > 1e-12)) throw ZeroProbabilityError("diffusive_density: P(#X = n) is below 1e-12");
    return pmf.mass[to_mask(a)] / level;
}

namespace {

struct SampleOutcome {
    bool degenerate = false;
    double gap = 1.0;
    double lambda_max = 0.0;
    double trace = 0.0;
};

ProbeReport run_probe(const char* name, const DppKernel& k, std::span<const std::size_t> b, std::size_t samples,
                      RngSeed seed, std::size_t threads) {
    if (b.empty()) throw std::invalid_argument(std::string(name) + ": the probed set B must be nonempty");
    const auto sorted_b = checked_window(b, k.size());
    const Sampler sampler(k);
    std::vector<SampleOutcome> outcomes(samples);
    parallel_for(samples, threads, [&](std::size_t s) {
        const Configuration x = sampler.sample(seed.split(s));
        Configuration exterior;
        for (std::size_t i : x.indices)
            if (!std::binary_search(sorted_b.begin(), sorted_b.end(), i)) exterior.indices.push_back(i);
        SampleOutcome& o = outcomes[s];
        try {
            const ConditionalResult r = conditional_kernel_with_spectrum(k, sorted_b, exterior);
            double gap = 1.0, trace = 0.0;
            for (double v : r.spectrum) {
                gap *= std::clamp(1.0 - v, 0.0, 1.0);
                trace += v;
            }
            o.gap = gap;
            o.trace = trace;
            o.lambda_max = r.spectrum.empty() ? 0.0 : r.spectrum.back();
        } catch (const DegenerateGeometryError&) {
            o.degenerate = true;
        } catch (const UndefinedPalmError&) {
            o.degenerate = true;
        }
    });

    ProbeReport rep;
    rep.probe = name;
    rep.samples = samples;
    rep.seed = seed;
    double trace_sum = 0.0;
    std::size_t counted = 0;
    rep.trace_stats.min = std::numeric_limits<double>::infinity();
    rep.trace_stats.max = 0.0;
    for (const SampleOutcome& o : outcomes) {
        if (o.degenerate) {
            ++rep.degenerate_events;
            continue;
        }
        rep.min_gap = std::min(rep.min_gap, o.gap);
        rep.max_lambda = std::max(rep.max_lambda, o.lambda_max);
        rep.min_insertion = std::min(rep.min_insertion, 1.0 - o.gap);
        rep.trace_stats.min = std::min(rep.trace_stats.min, o.trace);
        rep.trace_stats.max = std::max(rep.trace_stats.max, o.trace);
        trace_sum += o.trace;
        ++counted;
    }
    if (counted == 0) rep.trace_stats.min = 0.0;
    rep.trace_stats.mean = counted > 0 ? trace_sum / static_cast<double>(counted) : 0.0;
    return rep;
}

} // namespace

ProbeReport deletion_tolerance_probe(const DppKernel& k, std::span<const std::size_t> b, std::size_t samples,
                                     RngSeed seed, std::size_t threads) {
    ProbeReport rep = run_probe("deletion", k, b, samples, seed, threads);
    rep.pass = rep.degenerate_events == 0 && rep.min_gap > 0.0 && rep.max_lambda < 1.0 - kProbeThreshold;
    return rep;
}

ProbeReport number_insertion_probe(const DppKernel& k, std::span<const std::size_t> b, std::size_t samples,
                                   RngSeed seed, std::size_t threads) {
    ProbeReport rep = run_probe("insertion", k, b, samples, seed, threads);
    rep.pass = rep.degenerate_events == 0 && rep.trace_stats.min > kProbeThreshold;
    return rep;
}

} // namespace bergman
