#include "bergman/coupling.hpp"

#include "bergman/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace bergman {

namespace {

constexpr double kDust = 1e-14;

double popcount(Mask m) { return static_cast<double>(std::popcount(m)); }

// Residual graph for capacity-scaling augmenting paths.
class FlowGraph {
public:
    struct Edge {
        std::size_t to;
        std::size_t rev;
        double residual;
        double capacity;
    };

    explicit FlowGraph(std::size_t n) : adj_(n) {}

    std::size_t add_edge(std::size_t from, std::size_t to, double cap) {
        adj_[from].push_back({to, adj_[to].size(), cap, cap});
        adj_[to].push_back({from, adj_[from].size() - 1, 0.0, 0.0});
        return adj_[from].size() - 1;
    }

    double max_flow(std::size_t s, std::size_t t) {
        double max_cap = 0.0;
        for (const auto& list : adj_)
            for (const Edge& e : list) max_cap = std::max(max_cap, e.capacity);
        double flow = 0.0;
        if (max_cap <= 0.0) return flow;
        for (double delta = std::exp2(std::floor(std::log2(max_cap))); delta >= 1e-17; delta *= 0.5) {
            while (true) {
                const double pushed = augment(s, t, delta);
                if (pushed <= 0.0) break;
                flow += pushed;
            }
        }
        return flow;
    }

    // Nodes reachable from s through edges with positive residual.
    std::vector<bool> reachable(std::size_t s, double eps) const {
        std::vector<bool> seen(adj_.size(), false);
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (const Edge& e : adj_[u])
                if (e.residual > eps && !seen[e.to]) {
                    seen[e.to] = true;
                    queue.push_back(e.to);
                }
        }
        return seen;
    }

    const std::vector<Edge>& edges(std::size_t u) const { return adj_[u]; }

private:
    double augment(std::size_t s, std::size_t t, double delta) {
        std::vector<std::pair<std::size_t, std::size_t>> parent(adj_.size(), {SIZE_MAX, SIZE_MAX});
        std::deque<std::size_t> queue{s};
        parent[s] = {s, SIZE_MAX};
        while (!queue.empty() && parent[t].first == SIZE_MAX) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t i = 0; i < adj_[u].size(); ++i) {
                const Edge& e = adj_[u][i];
                if (e.residual >= delta && parent[e.to].first == SIZE_MAX) {
                    parent[e.to] = {u, i};
                    queue.push_back(e.to);
                }
            }
        }
        if (parent[t].first == SIZE_MAX) return 0.0;
        double bottleneck = std::numeric_limits<double>::infinity();
        for (std::size_t v = t; v != s; v = parent[v].first)
            bottleneck = std::min(bottleneck, adj_[parent[v].first][parent[v].second].residual);
        for (std::size_t v = t; v != s; v = parent[v].first) {
            Edge& e = adj_[parent[v].first][parent[v].second];
            e.residual -= bottleneck;
            adj_[e.to][e.rev].residual += bottleneck;
        }
        return bottleneck;
    }

    std::vector<std::vector<Edge>> adj_;
};

} // namespace

ConfigPmf CouplingTable::upper_marginal() const {
    ConfigPmf out{ground, std::vector<double>(std::size_t{1} << ground, 0.0)};
    for (const auto& e : entries) out.mass[e.upper] += e.mass;
    return out;
}

ConfigPmf CouplingTable::lower_marginal() const {
    ConfigPmf out{ground, std::vector<double>(std::size_t{1} << ground, 0.0)};
    for (const auto& e : entries) out.mass[e.lower] += e.mass;
    return out;
}

double CouplingTable::total() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.mass;
    return s;
}

double coupling_defect(const CouplingTable& t, const ConfigPmf& upper, const ConfigPmf& lower) {
    double worst = std::abs(t.total() - 1.0);
    for (const auto& e : t.entries) {
        if ((e.lower & ~e.upper) != 0) worst = std::max(worst, e.mass);
        if (e.mass < 0.0) worst = std::max(worst, -e.mass);
    }
    worst = std::max(worst, total_variation(t.upper_marginal(), upper));
    worst = std::max(worst, total_variation(t.lower_marginal(), lower));
    return worst;
}

CouplingTable monotone_coupling(const ConfigPmf& upper, const ConfigPmf& lower) {
    if (upper.ground != lower.ground || upper.mass.size() != lower.mass.size())
        throw std::invalid_argument("monotone_coupling: laws live on different ground sets");
    if (upper.ground > kMaxCouplingSites)
        throw std::invalid_argument("monotone_coupling: ground set larger than 8 sites");
    const std::size_t n_masks = upper.mass.size();

    std::vector<Mask> up_nodes, low_nodes;
    for (Mask a = 0; a < n_masks; ++a) {
        if (upper.mass[a] > kDust) up_nodes.push_back(a);
        if (lower.mass[a] > kDust) low_nodes.push_back(a);
    }
    const std::size_t source = 0, sink = 1;
    const std::size_t up0 = 2, low0 = 2 + up_nodes.size();
    FlowGraph g(low0 + low_nodes.size());
    for (std::size_t i = 0; i < up_nodes.size(); ++i) g.add_edge(source, up0 + i, upper.mass[up_nodes[i]]);
    for (std::size_t j = 0; j < low_nodes.size(); ++j) g.add_edge(low0 + j, sink, lower.mass[low_nodes[j]]);
    for (std::size_t i = 0; i < up_nodes.size(); ++i)
        for (std::size_t j = 0; j < low_nodes.size(); ++j)
            if ((low_nodes[j] & ~up_nodes[i]) == 0) g.add_edge(up0 + i, low0 + j, 2.0);

    const double flow = g.max_flow(source, sink);
    double lower_total = 0.0;
    for (Mask a : low_nodes) lower_total += lower.mass[a];

    if (flow < lower_total - 1e-9) {
        // Lower nodes cut off from the source generate a violating up-set.
        const auto seen = g.reachable(source, 1e-15);
        std::vector<bool> in_up(n_masks, false);
        for (std::size_t j = 0; j < low_nodes.size(); ++j) {
            if (seen[low0 + j]) continue;
            for (Mask a = 0; a < n_masks; ++a)
                if ((low_nodes[j] & ~a) == 0) in_up[a] = true;
        }
        std::vector<unsigned> up_set;
        double excess = 0.0;
        for (Mask a = 0; a < n_masks; ++a)
            if (in_up[a]) {
                up_set.push_back(a);
                excess += lower.mass[a] - upper.mass[a];
            }
        if (excess > 1e-9)
            throw DominationViolated("monotone_coupling: lower law is not dominated; up-set of " +
                                         std::to_string(up_set.size()) + " configurations has excess " +
                                         std::to_string(excess),
                                     std::move(up_set), excess);
        throw ConvergenceError("monotone_coupling: flow deficit without a violating up-set");
    }

    CouplingTable table{upper.ground, {}};
    for (std::size_t i = 0; i < up_nodes.size(); ++i)
        for (const auto& e : g.edges(up0 + i)) {
            if (e.to < low0 || e.capacity == 0.0) continue;
            const double f = e.capacity - e.residual;
            if (f > 0.0) table.entries.push_back({up_nodes[i], low_nodes[e.to - low0], f});
        }
    std::sort(table.entries.begin(), table.entries.end(), [](const CouplingEntry& a, const CouplingEntry& b) {
        return a.upper != b.upper ? a.upper < b.upper : a.lower < b.lower;
    });
    return table;
}

DominationReport domination_check(const DppKernel& k, const DppKernel& kp, std::size_t samples, RngSeed seed) {
    if (k.size() != kp.size()) throw std::invalid_argument("domination_check: kernels live on different ground sets");
    const std::size_t m = k.size();
    DominationReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.trace_upper = k.matrix.trace().real();
    rep.trace_lower = kp.matrix.trace().real();
    bool ok = rep.trace_lower <= rep.trace_upper + 1e-9;

    if (m <= 16) {
        for (std::size_t s = 1; s <= m; ++s) rep.set_sizes.push_back(s);
    } else {
        for (std::size_t j = 1; j <= 8; ++j) rep.set_sizes.push_back(std::max<std::size_t>(1, j * m / 8));
    }
    const std::size_t n_sets = rep.set_sizes.size();
    rep.upper_mean.assign(n_sets, 0.0);
    rep.lower_mean.assign(n_sets, 0.0);
    rep.mc_sigma.assign(n_sets, 0.0);

    if (m <= 10) {
        rep.exact = true;
        const ConfigPmf pu = exact_distribution(k), pl = exact_distribution(kp);
        for (std::size_t j = 0; j < n_sets; ++j) {
            const Mask s = static_cast<Mask>((Mask{1} << rep.set_sizes[j]) - 1);
            for (Mask a = 0; a < pu.mass.size(); ++a) {
                rep.upper_mean[j] += pu.mass[a] * popcount(a & s);
                rep.lower_mean[j] += pl.mass[a] * popcount(a & s);
            }
            ok = ok && rep.lower_mean[j] <= rep.upper_mean[j] + 1e-9;
        }
        if (m <= kMaxCouplingSites) {
            for (Mask s = 1; s < pu.mass.size(); ++s) {
                double contains_u = 0, contains_l = 0, meets_u = 0, meets_l = 0;
                for (Mask a = 0; a < pu.mass.size(); ++a) {
                    if ((a & s) == s) {
                        contains_u += pu.mass[a];
                        contains_l += pl.mass[a];
                    }
                    if (a & s) {
                        meets_u += pu.mass[a];
                        meets_l += pl.mass[a];
                    }
                }
                rep.worst_event_excess = std::max({rep.worst_event_excess, contains_l - contains_u, meets_l - meets_u});
                rep.events_checked += 2;
            }
            ok = ok && rep.worst_event_excess <= 1e-9;
        }
    } else {
        for (std::size_t j = 0; j < n_sets; ++j) {
            for (std::size_t i = 0; i < rep.set_sizes[j]; ++i) {
                rep.upper_mean[j] += k.matrix(i, i).real();
                rep.lower_mean[j] += kp.matrix(i, i).real();
            }
            ok = ok && rep.lower_mean[j] <= rep.upper_mean[j] + 1e-9;
        }
    }

    if (samples > 0) {
        const Sampler su(k), sl(kp);
        const RngSeed seed_u = seed.split(1), seed_l = seed.split(2);
        std::vector<double> sum_u(n_sets, 0), sum_l(n_sets, 0), sq_u(n_sets, 0), sq_l(n_sets, 0);
        for (std::size_t t = 0; t < samples; ++t) {
            const Configuration xu = su.sample(seed_u.split(t));
            const Configuration xl = sl.sample(seed_l.split(t));
            for (std::size_t j = 0; j < n_sets; ++j) {
                const std::size_t lim = rep.set_sizes[j];
                const double cu = static_cast<double>(std::count_if(xu.indices.begin(), xu.indices.end(),
                                                                    [&](std::size_t i) { return i < lim; }));
                const double cl = static_cast<double>(std::count_if(xl.indices.begin(), xl.indices.end(),
                                                                    [&](std::size_t i) { return i < lim; }));
                sum_u[j] += cu;
                sq_u[j] += cu * cu;
                sum_l[j] += cl;
                sq_l[j] += cl * cl;
            }
        }
        const double n = static_cast<double>(samples);
        for (std::size_t j = 0; j < n_sets; ++j) {
            const double mu = sum_u[j] / n, ml = sum_l[j] / n;
            const double vu = std::max(0.0, sq_u[j] / n - mu * mu), vl = std::max(0.0, sq_l[j] / n - ml * ml);
            rep.mc_sigma[j] = std::sqrt((vu + vl) / n);
            ok = ok && ml <= mu + 3.0 * rep.mc_sigma[j] + 1e-12;
        }
    }
    rep.pass = ok;
    return rep;
}

TraceBoundReport difference_trace_bound(const DppKernel& k, const PalmTuple& p, const CouplingTable& coupling) {
    if (coupling.ground != k.size()) throw std::invalid_argument("difference_trace_bound: coupling ground set differs");
    const DppKernel kp = palm_kernel(k, p);
    TraceBoundReport rep;
    for (const auto& e : coupling.entries) rep.expected_difference += e.mass * (popcount(e.upper) - popcount(e.lower));
    rep.trace_difference = (k.matrix - kp.matrix).trace().real();
    rep.identity_error = std::abs(rep.expected_difference - (k.matrix.trace().real() - kp.matrix.trace().real()));
    rep.bound_holds = rep.expected_difference <= rep.trace_difference + 1e-9;
    rep.identity_holds = rep.identity_error <= 1e-9;
    rep.pass = rep.bound_holds && rep.identity_holds;
    return rep;
}

} // namespace bergman
