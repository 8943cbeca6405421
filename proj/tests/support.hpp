#pragma once

#include <cmath>
#include <vector>

#include "mixcascade/analytics.hpp"
#include "mixcascade/cascade.hpp"
#include "mixcascade/generators.hpp"
#include "mixcascade/graph.hpp"
#include "mixcascade/placement.hpp"
#include "oracle/exact_chain.hpp"

namespace testsupport {

using namespace mixcascade;

inline Network make(std::vector<Edge> edges, NodeId z) { return Network::from_edges(edges, z); }

inline Network star(int leaves) {
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i)
        e.emplace_back(0, i);
    return make(e, leaves + 1);
}

inline Network path(int z) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < z; ++i)
        e.emplace_back(i, i + 1);
    return make(e, z);
}

inline Network cycle(int z) {
    std::vector<Edge> e;
    for (int i = 0; i < z; ++i)
        e.emplace_back(i, (i + 1) % z);
    return make(e, z);
}

inline ProfileAssignment profiles_from(const std::vector<Profile>& p) {
    ProfileAssignment a;
    a.profiles = p;
    std::int64_t ss = 0;
    for (Profile x : p)
        ss += x == Profile::SS;
    a.theta = Rational(ss, static_cast<std::int64_t>(p.size()));
    return a;
}

inline oracle::SmallGraph to_oracle(const Network& net, const ProfileAssignment& a, const Rational& gamma) {
    oracle::SmallGraph g;
    g.z = net.node_count();
    g.adj.resize(g.z);
    g.ss.resize(g.z);
    for (NodeId i = 0; i < g.z; ++i) {
        for (NodeId j : net.neighbors(i))
            g.adj[i].push_back(j);
        g.ss[i] = a.profiles[i] == Profile::SS;
    }
    g.gamma_num = gamma.num();
    g.gamma_den = gamma.den();
    return g;
}

inline std::uint32_t mask_of(const std::vector<std::uint8_t>& active) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < active.size(); ++i)
        if (active[i])
            s |= 1u << i;
    return s;
}

// Random small instance: G(z, p) with p in [0.3, 0.9] and random profiles.
struct SmallInstance {
    Network net;
    ProfileAssignment assignment;
};

inline SmallInstance random_small_instance(Rng& rng, int z_min = 3, int z_max = 8) {
    const int z = z_min + static_cast<int>(rng.uniform_index(z_max - z_min + 1));
    const double p = 0.3 + 0.6 * rng.uniform01();
    SmallInstance out{gnp(z, p, rng), {}};
    std::vector<Profile> prof(z);
    for (auto& x : prof)
        x = rng.uniform01() < 0.5 ? Profile::SS : Profile::TBS;
    out.assignment = profiles_from(prof);
    return out;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
    double s = 0.0, ss = 0.0;
    for (double x : v) {
        s += x;
        ss += x * x;
    }
    const double n = static_cast<double>(v.size());
    MeanSe r;
    r.mean = s / n;
    const double var = n > 1 ? std::max(0.0, (ss - s * s / n) / (n - 1)) : 0.0;
    r.se = std::sqrt(var / n);
    return r;
}

}  // namespace testsupport
