#include "der/der.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "der/errors.hpp"
#include "der/parallel.hpp"
#include "der/seed.hpp"

namespace der {

std::vector<std::vector<int>> Partition::cluster_members() const {
    std::vector<std::vector<int>> members(k);
    for (int a = 0; a < static_cast<int>(assignment.size()); ++a) members[assignment[a]].push_back(a);
    return members;
}

Partition random_equal_partition(int n_active, int k, std::uint64_t seed) {
    if (k < 1 || k > n_active)
        throw InvalidInput("random_equal_partition: need 1 <= k <= n_active, got k=" + std::to_string(k) +
                           ", n_active=" + std::to_string(n_active));
    std::vector<int> order(n_active);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    Partition p;
    p.k = k;
    p.assignment.assign(n_active, 0);
    int base = n_active / k, extra = n_active % k;
    int pos = 0;
    for (int s = 0; s < k; ++s) {
        int size = base + (s < extra ? 1 : 0);
        for (int t = 0; t < size; ++t) p.assignment[order[pos++]] = s;
    }
    return p;
}

void means_step(DerState& state) {
    const Graph& g = *state.graph;
    const DiffusionSet& ds = *state.diffusion;
    auto members = state.partition.cluster_members();
    state.cluster_measures.resize(state.partition.k);
    for (int s = 0; s < state.partition.k; ++s) {
        std::vector<int> vertices;
        vertices.reserve(members[s].size());
        for (int a : members[s]) vertices.push_back(ds.vertices[a]);
        state.cluster_measures[s] = cluster_measure(g, ds, vertices);
    }
}

bool assign_step(DerState& state, int threads) {
    const DiffusionSet& ds = *state.diffusion;
    const int n = static_cast<int>(state.partition.assignment.size());
    const int k = state.partition.k;
    std::vector<int> next(n);
    parallel_chunks(n, threads, [&](int begin, int end) {
        for (int a = begin; a < end; ++a) {
            const SparseMeasure& w = ds.measures[a];
            double best = -std::numeric_limits<double>::infinity();
            int best_s = -1;
            for (int s = 0; s < k; ++s) {
                double sc = score(w, state.cluster_measures[s]);
                if (sc > best) {
                    best = sc;
                    best_s = s;
                }
            }
            // All -infinity can only happen for a vertex disconnected from
            // every cluster's L-neighborhood; keep its current cluster.
            next[a] = best_s < 0 ? state.partition.assignment[a] : best_s;
        }
    });
    bool changed = next != state.partition.assignment;
    state.partition.assignment = std::move(next);
    return changed;
}

bool repair_empty_clusters(DerState& state) {
    const DiffusionSet& ds = *state.diffusion;
    const int n = static_cast<int>(state.partition.assignment.size());
    const int k = state.partition.k;
    std::vector<int> sizes(k, 0);
    for (int a = 0; a < n; ++a) ++sizes[state.partition.assignment[a]];

    bool repaired = false;
    for (int s = 0; s < k; ++s) {
        if (sizes[s] > 0) continue;
        // Reseed with the vertex scoring worst against its own cluster
        // measure, taken from a cluster that can spare it.
        double worst = std::numeric_limits<double>::infinity();
        int worst_a = -1;
        for (int a = 0; a < n; ++a) {
            int cur = state.partition.assignment[a];
            if (sizes[cur] < 2) continue;
            double sc = score(ds.measures[a], state.cluster_measures[cur]);
            if (sc < worst) {
                worst = sc;
                worst_a = a;
            }
        }
        if (worst_a < 0) throw InvalidInput("repair_empty_clusters: no donor cluster available");
        --sizes[state.partition.assignment[worst_a]];
        state.partition.assignment[worst_a] = s;
        ++sizes[s];
        repaired = true;
    }
    return repaired;
}

double cost(const DerState& state) {
    const Graph& g = *state.graph;
    const DiffusionSet& ds = *state.diffusion;
    double c = 0.0;
    for (int a = 0; a < static_cast<int>(state.partition.assignment.size()); ++a) {
        int i = ds.vertices[a];
        c += g.degree[i] * score(ds.measures[a], state.cluster_measures[state.partition.assignment[a]]);
    }
    return c;
}

EntropyDecomposition entropy_decomposition(const DerState& state) {
    const Graph& g = *state.graph;
    const DiffusionSet& ds = *state.diffusion;
    const int k = state.partition.k;

    // pi(P_s) = d_{P_s} / d_V
    std::vector<double> p_z(k, 0.0);
    for (int a = 0; a < static_cast<int>(state.partition.assignment.size()); ++a)
        p_z[state.partition.assignment[a]] += g.degree[ds.vertices[a]] / g.total_degree;

    // Joint of (Z, Y) is p_z[s] * mu_s(j); its Y-marginal.
    std::vector<double> p_y(g.n, 0.0);
    for (int s = 0; s < k; ++s)
        for (const auto& [j, m] : state.cluster_measures[s].entries) p_y[j] += p_z[s] * m;

    auto nlogn = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };

    EntropyDecomposition e;
    for (int s = 0; s < k; ++s) {
        e.h_z -= nlogn(p_z[s]);
        double h_mu = 0.0;
        for (const auto& [j, m] : state.cluster_measures[s].entries) {
            h_mu -= nlogn(m);
            double joint = p_z[s] * m;
            if (joint > 0.0) e.h_z_given_y -= joint * std::log(joint / p_y[j]);
        }
        e.h_y_given_z += p_z[s] * h_mu;
    }
    for (int j = 0; j < g.n; ++j) e.h_y -= nlogn(p_y[j]);
    return e;
}

DerState run(const Graph& g, const DiffusionSet& ds, const DerParams& params,
             std::vector<std::vector<double>>* all_traces) {
    if (params.k < 1) throw InvalidInput("run: k must be >= 1");
    if (params.max_iters < 1) throw InvalidInput("run: max_iters must be >= 1");
    if (params.restarts < 1) throw InvalidInput("run: restarts must be >= 1");
    const int n_active = static_cast<int>(ds.vertices.size());
    if (params.k > n_active) throw InvalidInput("run: k exceeds the number of active vertices");

    DerState best;
    double best_cost = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < params.restarts; ++r) {
        DerState st;
        st.graph = &g;
        st.diffusion = &ds;
        st.partition = random_equal_partition(n_active, params.k, derive_seed(params.seed, r));
        means_step(st);
        for (int iter = 1; iter <= params.max_iters; ++iter) {
            bool changed = assign_step(st, params.threads);
            bool repaired = repair_empty_clusters(st);
            means_step(st);
            st.cost_trace.push_back(cost(st));
            st.iterations = iter;
            if (!changed && !repaired) {
                st.converged = true;
                break;
            }
        }
        if (all_traces) all_traces->push_back(st.cost_trace);
        double final_cost = st.cost_trace.back();
        if (final_cost > best_cost) {
            best_cost = final_cost;
            best = std::move(st);
        }
    }
    return best;
}

}  // namespace der
