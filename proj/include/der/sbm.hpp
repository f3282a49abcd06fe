#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "der/der.hpp"
#include "der/graph.hpp"

namespace der {

// p,q-stochastic block model: within-block edge probability p, cross-block
// q, all unordered pairs independent, no self-loops.
struct SbmSpec {
    int N = 0;
    int k = 2;
    double p = 0;
    double q = 0;
    std::uint64_t seed = 0;

    void validate() const;  // throws InvalidInput
};

struct SbmSample {
    Graph graph;
    std::vector<int> planted;  // per vertex, block index
};

SbmSample sample_sbm(const SbmSpec& spec);

// d_2(i, S): number of length-two walks i -> j -> v with v in S, i.e.
// sum_{j in n_i} |n_j intersect S|. Backtracking i -> j -> i counts iff
// i is in S. Unweighted graphs only.
long count_two_paths(const Graph& g, int i, std::span<const int> s);

enum class Block { P1 = 1, P2 = 2 };
enum class InitSide { C1 = 1, C2 = 2 };

// Closed-form E d_2(j, C_target) for a k=2 SBM with a fixed random
// bipartition C_1, C_2 where N1 = |C1 ∩ P1| and N2 = |C1 ∩ P2|.
double expected_two_paths(int N, int N1, int N2, double p, double q, Block j_block, InitSide target);

struct TrialRecord {
    bool success = false;          // exact planted recovery after one iteration
    double nmi_one_iter = 0;
    double nmi_converged = 0;
    int iterations_to_converge = 0;
    bool converged_changed = false;  // converged partition differs from one-iteration one
};

struct RecoveryReport {
    int trials = 0;
    int successes = 0;
    double mean_nmi = 0;  // of the one-iteration partition vs planted
    double mean_seconds = 0;
    std::vector<TrialRecord> records;
};

// Theorem-style harness: per trial, fresh SBM draw + fresh random equal
// bipartition, one means+assign pass with L=1; success = exact recovery.
// Also continues each trial to convergence for comparison.
RecoveryReport recovery_experiment(const SbmSpec& spec, int trials, std::uint64_t seed, int threads = 0);

struct SignDiagnostic {
    double agreement = 0;  // fraction of vertices where exact and 2-path signs match
    int delta_n = 0;       // |C1 ∩ P1| - |C2 ∩ P1|
};

// Compares the exact decision D(w_i, mu_C1) - D(w_i, mu_C2) against its
// 2-path linearization (d_2(i,C1) - d_2(i,C2)) / mean_j d(j,C2) plus the
// d_i * ln(d_C2 / d_C1) degree term. L = 1, unweighted graphs only.
SignDiagnostic sign_diagnostic(const Graph& g, const std::vector<int>& planted, const std::vector<int>& init);

}  // namespace der
