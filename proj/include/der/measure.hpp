#pragma once

#include <utility>
#include <vector>

namespace der {

// Probability measure over vertices, stored as (vertex, mass) pairs with
// strictly positive mass, sorted by vertex index. Immutable by convention
// once built; cheap to share between workers.
struct SparseMeasure {
    std::vector<std::pair<int, double>> entries;

    double mass_at(int v) const;
    double total() const;
    std::size_t support_size() const { return entries.size(); }
};

// D(nu, mu) = sum over support(nu) of nu(i) * ln mu(i). Returns -infinity
// when nu puts mass where mu has none. Larger is closer.
double score(const SparseMeasure& nu, const SparseMeasure& mu);

}  // namespace der
