#pragma once

#include <vector>

namespace der {

// Joint cluster-overlap counts of two labelings of the same vertex set.
// Labels may be arbitrary ints; they are compressed internally.
struct Contingency {
    int n = 0;
    std::vector<std::vector<long>> counts;  // rows: labels of P, cols: labels of Q
    std::vector<long> row_sums;
    std::vector<long> col_sums;

    static Contingency build(const std::vector<int>& p, const std::vector<int>& q);
};

// NMI(P,Q) = 2 I / (H(P) + H(Q)), uniform vertex weights, in [0,1].
// Both-trivial (single cluster each) returns 1 by convention.
double nmi(const std::vector<int>& p, const std::vector<int>& q);

// Minimum number of disagreeing vertices over all injective label
// matchings (optimal assignment on the contingency); unmatched clusters
// count all their vertices as errors.
long misclassified(const std::vector<int>& p, const std::vector<int>& q);

// Maximum-total-value assignment of a rectangular non-negative matrix
// (Hungarian algorithm). Exposed for tests.
long max_assignment(const std::vector<std::vector<long>>& value);

}  // namespace der
