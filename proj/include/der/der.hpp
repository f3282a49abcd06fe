#pragma once

#include <cstdint>
#include <vector>

#include "der/diffusion.hpp"
#include "der/graph.hpp"

namespace der {

// Hard assignment of each active vertex (by its DiffusionSet slot) to one
// of k clusters.
struct Partition {
    int k = 0;
    std::vector<int> assignment;  // per active slot, value in [0, k)

    std::vector<std::vector<int>> cluster_members() const;
};

// Uniformly random partition of n_active slots with cluster sizes differing
// by at most one. Deterministic for a fixed seed.
Partition random_equal_partition(int n_active, int k, std::uint64_t seed);

struct DerParams {
    int k = 2;
    int L = 5;
    std::uint64_t seed = 0;
    int max_iters = 100;
    int restarts = 1;
    int threads = 0;  // 0 = all available
};

struct DerState {
    const Graph* graph = nullptr;
    const DiffusionSet* diffusion = nullptr;
    Partition partition;
    std::vector<SparseMeasure> cluster_measures;  // mu_1..mu_k
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_trace;  // C after each full (means + assign) iteration
};

// Step (1): mu_s = mu_{P_s}. Empty clusters are repaired first (see
// repair_empty_clusters).
void means_step(DerState& state);

// Step (2): move every active vertex to argmax_l D(w_i, mu_l). Ties go to
// the lowest cluster index; a vertex whose scores are all -infinity keeps
// its current cluster. Returns true when the partition changed. Does not
// refresh measures.
bool assign_step(DerState& state, int threads = 0);

// Moves the worst-scoring vertex of a multi-member cluster into each empty
// cluster. Returns true when any repair happened. Call means_step after.
bool repair_empty_clusters(DerState& state);

// C = sum_s sum_{i in P_s} d_i * D(w_i, mu_s).
double cost(const DerState& state);

struct EntropyDecomposition {
    double h_y_given_z = 0;  // C = -d_V * H(Y|Z)
    double h_y = 0;
    double h_z = 0;
    double h_z_given_y = 0;
};

// Entropies (nats) of the pair (Z, Y): Z the cluster of X ~ pi, Y ~ w_X.
EntropyDecomposition entropy_decomposition(const DerState& state);

// Full algorithm: for each restart, random equal init, then alternate
// means/assign until the partition stops changing or max_iters is hit.
// Returns the state with maximal final cost across restarts. When
// all_traces is given it receives one cost trace per restart.
DerState run(const Graph& g, const DiffusionSet& ds, const DerParams& params,
             std::vector<std::vector<double>>* all_traces = nullptr);

}  // namespace der
