#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "der/der.hpp"

namespace der {

// Sparse symmetric count of how many runs placed each vertex pair in the
// same cluster. Stored once per unordered pair (i < j), only when >= 1.
struct CoOccurrence {
    int n_active = 0;
    int R = 0;
    std::unordered_map<std::uint64_t, int> counts;  // key = i * n_active + j, i < j

    int count(int i, int j) const;
    void dump(std::ostream& out) const;  // "i j count" lines, i < j
};

CoOccurrence cooccurrence(const std::vector<Partition>& partitions);

// Greedy threshold algorithm with T = ceil(R/2): repeatedly take the lowest
// remaining vertex i and emit {j remaining : count(i,j) >= T} + {i}.
// Cluster count is data-driven.
Partition threshold_cluster(const CoOccurrence& co);

struct RunSummary {
    double cost = 0;
    int iterations = 0;
    bool converged = false;
};

struct RepeatsResult {
    Partition final;
    CoOccurrence co;
    std::vector<RunSummary> runs;
};

// Appendix-style repeats: R independent DER runs (seeds derived from the
// master seed), aggregated through the co-occurrence matrix.
RepeatsResult run_repeats(const Graph& g, const DiffusionSet& ds, const DerParams& params, int repeats);

}  // namespace der
