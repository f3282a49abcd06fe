#include "der/metrics.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <unordered_map>

#include "der/errors.hpp"

namespace der {

namespace {

std::vector<int> compress(const std::vector<int>& labels, int& k) {
    std::unordered_map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    k = static_cast<int>(remap.size());
    return out;
}

// Hungarian algorithm, min-cost square assignment.
long hungarian_min_cost(const std::vector<std::vector<long>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<long> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long> minv(n + 1, LONG_MAX);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            long delta = LONG_MAX;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    long total = 0;
    for (int j = 1; j <= n; ++j)
        if (p[j]) total += cost[p[j] - 1][j - 1];
    return total;
}

}  // namespace

Contingency Contingency::build(const std::vector<int>& p, const std::vector<int>& q) {
    if (p.size() != q.size()) throw InvalidInput("contingency: partitions cover different vertex sets");
    if (p.empty()) throw InvalidInput("contingency: empty partitions");
    int kp = 0, kq = 0;
    std::vector<int> cp = compress(p, kp), cq = compress(q, kq);
    Contingency c;
    c.n = static_cast<int>(p.size());
    c.counts.assign(kp, std::vector<long>(kq, 0));
    c.row_sums.assign(kp, 0);
    c.col_sums.assign(kq, 0);
    for (int i = 0; i < c.n; ++i) {
        ++c.counts[cp[i]][cq[i]];
        ++c.row_sums[cp[i]];
        ++c.col_sums[cq[i]];
    }
    return c;
}

double nmi(const std::vector<int>& p, const std::vector<int>& q) {
    Contingency c = Contingency::build(p, q);
    const double n = static_cast<double>(c.n);
    auto entropy = [&](const std::vector<long>& sums) {
        double h = 0.0;
        for (long s : sums)
            if (s > 0) h -= (s / n) * std::log(s / n);
        return h;
    };
    double hp = entropy(c.row_sums), hq = entropy(c.col_sums);
    if (hp + hq == 0.0) return 1.0;  // both trivial single-cluster partitions
    // Accumulate in sorted order so nmi(p, q) == nmi(q, p) exactly: the
    // transposed table yields the same multiset of terms.
    std::vector<double> terms;
    for (std::size_t a = 0; a < c.counts.size(); ++a)
        for (std::size_t b = 0; b < c.counts[a].size(); ++b) {
            long nab = c.counts[a][b];
            if (nab > 0)
                terms.push_back((nab / n) *
                                std::log(nab * n / (static_cast<double>(c.row_sums[a]) * c.col_sums[b])));
        }
    std::sort(terms.begin(), terms.end());
    double info = 0.0;
    for (double t : terms) info += t;
    return 2.0 * info / (hp + hq);
}

long max_assignment(const std::vector<std::vector<long>>& value) {
    if (value.empty()) return 0;
    const int rows = static_cast<int>(value.size());
    const int cols = static_cast<int>(value[0].size());
    const int n = std::max(rows, cols);
    long max_val = 0;
    for (const auto& row : value)
        for (long x : row) max_val = std::max(max_val, x);
    // Square pad; absent cells carry value 0.
    std::vector<std::vector<long>> cost(n, std::vector<long>(n, max_val));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) cost[i][j] = max_val - value[i][j];
    return static_cast<long>(n) * max_val - hungarian_min_cost(cost);
}

long misclassified(const std::vector<int>& p, const std::vector<int>& q) {
    Contingency c = Contingency::build(p, q);
    return c.n - max_assignment(c.counts);
}

}  // namespace der
