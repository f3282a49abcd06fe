#include "der/overlap.hpp"

#include <algorithm>

#include "der/errors.hpp"

namespace der {

MembershipProfile membership(const DerState& state) {
    const Graph& g = *state.graph;
    const DiffusionSet& ds = *state.diffusion;
    const int k = state.partition.k;
    const int n_active = static_cast<int>(state.partition.assignment.size());
    if (static_cast<int>(state.cluster_measures.size()) != k)
        throw InvalidInput("membership: cluster measures not built");

    std::vector<double> p_z(k, 0.0);
    for (int a = 0; a < n_active; ++a)
        p_z[state.partition.assignment[a]] += g.degree[ds.vertices[a]] / g.total_degree;

    MembershipProfile profile;
    profile.k = k;
    profile.rows.assign(n_active, std::vector<double>(k, 0.0));
    for (int s = 0; s < k; ++s) {
        for (const auto& [v, m] : state.cluster_measures[s].entries) {
            // mu_s is supported on active vertices only (every support
            // vertex has an incoming edge).
            int a = ds.slot[v];
            double pi_v = g.degree[v] / g.total_degree;
            profile.rows[a][s] = m * p_z[s] / pi_v;
        }
    }
    return profile;
}

CommunityCover extract_cover(const MembershipProfile& profile, double theta) {
    if (theta <= 0.0 || theta > 1.0) throw InvalidInput("extract_cover: theta must be in (0, 1]");
    CommunityCover cover;
    cover.communities.assign(profile.k, {});
    for (int a = 0; a < static_cast<int>(profile.rows.size()); ++a) {
        const auto& row = profile.rows[a];
        double best = *std::max_element(row.begin(), row.end());
        for (int s = 0; s < profile.k; ++s)
            if (row[s] >= theta * best) cover.communities[s].push_back(a);
    }
    return cover;
}

}  // namespace der
