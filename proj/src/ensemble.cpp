#include "der/ensemble.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>

#include "der/errors.hpp"
#include "der/parallel.hpp"
#include "der/seed.hpp"

namespace der {

namespace {
inline std::uint64_t pair_key(int n, int i, int j) {
    return static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(j);
}
}  // namespace

int CoOccurrence::count(int i, int j) const {
    if (i == j) return R;
    if (i > j) std::swap(i, j);
    auto it = counts.find(pair_key(n_active, i, j));
    return it == counts.end() ? 0 : it->second;
}

void CoOccurrence::dump(std::ostream& out) const {
    std::vector<std::uint64_t> keys;
    keys.reserve(counts.size());
    for (const auto& [key, c] : counts) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (std::uint64_t key : keys) {
        int i = static_cast<int>(key / n_active);
        int j = static_cast<int>(key % n_active);
        out << i << ' ' << j << ' ' << counts.at(key) << '\n';
    }
}

CoOccurrence cooccurrence(const std::vector<Partition>& partitions) {
    if (partitions.empty()) throw InvalidInput("cooccurrence: need at least one partition");
    const int n = static_cast<int>(partitions[0].assignment.size());
    for (const Partition& p : partitions)
        if (static_cast<int>(p.assignment.size()) != n)
            throw InvalidInput("cooccurrence: partitions cover different vertex sets");

    CoOccurrence co;
    co.n_active = n;
    co.R = static_cast<int>(partitions.size());
    for (const Partition& p : partitions) {
        for (const auto& members : p.cluster_members())
            for (std::size_t a = 0; a < members.size(); ++a)
                for (std::size_t b = a + 1; b < members.size(); ++b)
                    ++co.counts[pair_key(n, members[a], members[b])];
    }
    return co;
}

Partition threshold_cluster(const CoOccurrence& co) {
    const int n = co.n_active;
    const int threshold = (co.R + 1) / 2;  // ceil(R/2)

    // Neighbor lists over pairs meeting the threshold.
    std::vector<std::vector<int>> above(n);
    for (const auto& [key, c] : co.counts) {
        if (c < threshold) continue;
        int i = static_cast<int>(key / n);
        int j = static_cast<int>(key % n);
        above[i].push_back(j);
        above[j].push_back(i);
    }

    Partition out;
    out.assignment.assign(n, -1);
    std::vector<char> remaining(n, 1);
    int next_cluster = 0;
    for (int i = 0; i < n; ++i) {
        if (!remaining[i]) continue;
        out.assignment[i] = next_cluster;
        remaining[i] = 0;
        for (int j : above[i]) {
            if (!remaining[j]) continue;
            out.assignment[j] = next_cluster;
            remaining[j] = 0;
        }
        ++next_cluster;
    }
    out.k = next_cluster;
    return out;
}

RepeatsResult run_repeats(const Graph& g, const DiffusionSet& ds, const DerParams& params, int repeats) {
    if (repeats < 1) throw InvalidInput("run_repeats: repeats must be >= 1");
    std::vector<Partition> partitions(repeats);
    std::vector<RunSummary> summaries(repeats);
    parallel_chunks(repeats, params.threads, [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            DerParams p = params;
            p.seed = derive_seed(params.seed, 1000 + r);
            p.threads = 1;  // parallelism is across runs here
            DerState st = run(g, ds, p);
            summaries[r] = {st.cost_trace.back(), st.iterations, st.converged};
            partitions[r] = std::move(st.partition);
        }
    });
    RepeatsResult result;
    result.co = cooccurrence(partitions);
    result.final = threshold_cluster(result.co);
    result.runs = std::move(summaries);
    return result;
}

}  // namespace der
