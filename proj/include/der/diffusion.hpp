#pragma once

#include <span>

#include "der/graph.hpp"
#include "der/measure.hpp"

namespace der {

// The family {w_i}: for each active vertex i, the average of its t-step
// walk distributions for t = 1..L.
struct DiffusionSet {
    int L = 0;
    std::vector<int> vertices;           // active vertices, ascending
    std::vector<int> slot;               // graph vertex -> position in `vertices`, -1 if inactive
    std::vector<SparseMeasure> measures; // parallel to `vertices`

    const SparseMeasure& of(int vertex) const { return measures[slot[vertex]]; }
};

// Row i of the transition matrix T = D^{-1} A: mass a_ij / d_i at each
// neighbor j. Throws InvalidInput for an isolated vertex.
SparseMeasure transition_row(const Graph& g, int i);

// w_i = (1/L)(w_i^1 + ... + w_i^L), computed by iterated sparse
// vector-operator application. threads = 0 means use all available cores.
DiffusionSet walk_measures(const Graph& g, int L, int threads = 0);

// mu_S = (1/d_S) sum_{i in S} d_i w_i, the distribution of a walk started
// from the stationary measure restricted to S. Members must be active.
SparseMeasure cluster_measure(const Graph& g, const DiffusionSet& ds, std::span<const int> members);

}  // namespace der
