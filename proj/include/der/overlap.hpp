#pragma once

#include <vector>

#include "der/der.hpp"

namespace der {

// Per active vertex, m_i(s) = mu_{P_s}(i) * pi(P_s) / pi(i): the posterior
// over clusters given that the walk landed in i. Rows sum to 1.
struct MembershipProfile {
    int k = 0;
    std::vector<std::vector<double>> rows;  // per active slot
};

// Possibly-overlapping communities; every active vertex appears in at
// least one.
struct CommunityCover {
    std::vector<std::vector<int>> communities;  // active slots, ascending
};

MembershipProfile membership(const DerState& state);

// i joins C_t iff m_i(t) >= theta * max_s m_i(s). theta = 0.5 reproduces
// the hard-partition-plus-borderline extraction; theta = 1 degenerates to
// the argmax clusters (plus exact ties).
CommunityCover extract_cover(const MembershipProfile& profile, double theta = 0.5);

}  // namespace der
