#include "der/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "der/errors.hpp"
#include "der/parallel.hpp"

namespace der {

double SparseMeasure::mass_at(int v) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), v,
                               [](const std::pair<int, double>& e, int key) { return e.first < key; });
    return (it != entries.end() && it->first == v) ? it->second : 0.0;
}

double SparseMeasure::total() const {
    double s = 0.0;
    for (const auto& [v, m] : entries) s += m;
    return s;
}

double score(const SparseMeasure& nu, const SparseMeasure& mu) {
    double s = 0.0;
    auto it = mu.entries.begin();
    const auto end = mu.entries.end();
    for (const auto& [v, m] : nu.entries) {
        while (it != end && it->first < v) ++it;
        if (it == end || it->first != v) return -std::numeric_limits<double>::infinity();
        s += m * std::log(it->second);
    }
    return s;
}

SparseMeasure transition_row(const Graph& g, int i) {
    if (i < 0 || i >= g.n) throw InvalidInput("transition_row: vertex out of range");
    if (g.degree[i] <= 0.0) throw InvalidInput("transition_row: undefined for isolated vertex " + g.ids[i]);
    SparseMeasure row;
    row.entries.reserve(g.adj[i].size());
    for (const Edge& e : g.adj[i]) row.entries.emplace_back(e.to, e.weight / g.degree[i]);
    return row;
}

namespace {

// Per-worker scratch: dense accumulators plus touched lists, reused across
// vertices so supports stay sparse without reallocating.
struct Scratch {
    std::vector<double> cur, next, acc;
    std::vector<int> cur_touched, next_touched, acc_touched;

    explicit Scratch(int n) : cur(n, 0.0), next(n, 0.0), acc(n, 0.0) {}
};

SparseMeasure walk_measure_of(const Graph& g, int L, int i, Scratch& s) {
    s.cur_touched.assign(1, i);
    s.cur[i] = 1.0;
    s.acc_touched.clear();
    for (int t = 1; t <= L; ++t) {
        s.next_touched.clear();
        for (int j : s.cur_touched) {
            double mass = s.cur[j];
            double dj = g.degree[j];
            for (const Edge& e : g.adj[j]) {
                if (s.next[e.to] == 0.0) s.next_touched.push_back(e.to);
                s.next[e.to] += mass * e.weight / dj;
            }
        }
        for (int v : s.next_touched) {
            if (s.acc[v] == 0.0) s.acc_touched.push_back(v);
            s.acc[v] += s.next[v];
        }
        for (int v : s.cur_touched) s.cur[v] = 0.0;
        std::swap(s.cur, s.next);
        std::swap(s.cur_touched, s.next_touched);
    }
    for (int v : s.cur_touched) s.cur[v] = 0.0;

    std::sort(s.acc_touched.begin(), s.acc_touched.end());
    SparseMeasure w;
    w.entries.reserve(s.acc_touched.size());
    for (int v : s.acc_touched) {
        w.entries.emplace_back(v, s.acc[v] / L);
        s.acc[v] = 0.0;
    }
    return w;
}

}  // namespace

DiffusionSet walk_measures(const Graph& g, int L, int threads) {
    if (L < 1) throw InvalidInput("walk_measures: L must be >= 1");
    DiffusionSet ds;
    ds.L = L;
    ds.vertices = g.active_vertices();
    ds.slot.assign(g.n, -1);
    for (int a = 0; a < static_cast<int>(ds.vertices.size()); ++a) ds.slot[ds.vertices[a]] = a;
    ds.measures.resize(ds.vertices.size());

    parallel_chunks(static_cast<int>(ds.vertices.size()), threads, [&](int begin, int end) {
        Scratch scratch(g.n);
        for (int a = begin; a < end; ++a) ds.measures[a] = walk_measure_of(g, L, ds.vertices[a], scratch);
    });
    return ds;
}

SparseMeasure cluster_measure(const Graph& g, const DiffusionSet& ds, std::span<const int> members) {
    if (members.empty()) throw InvalidInput("cluster_measure: empty cluster");
    double d_s = 0.0;
    for (int i : members) {
        if (i < 0 || i >= g.n || ds.slot[i] < 0)
            throw InvalidInput("cluster_measure: member is not an active vertex");
        d_s += g.degree[i];
    }
    // Dense accumulation in member order; members are processed in the
    // caller-given order, so results are deterministic for a fixed input.
    std::vector<double> acc(g.n, 0.0);
    std::vector<int> touched;
    for (int i : members) {
        double scale = g.degree[i] / d_s;
        for (const auto& [v, m] : ds.of(i).entries) {
            if (acc[v] == 0.0) touched.push_back(v);
            acc[v] += scale * m;
        }
    }
    std::sort(touched.begin(), touched.end());
    SparseMeasure mu;
    mu.entries.reserve(touched.size());
    for (int v : touched) mu.entries.emplace_back(v, acc[v]);
    return mu;
}

}  // namespace der
