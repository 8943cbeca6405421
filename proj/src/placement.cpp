#include "mixcascade/placement.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mixcascade {

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::RANDOM: return "RANDOM";
    case Strategy::TBS_BY_DEGREE: return "TBS_BY_DEGREE";
    case Strategy::SS_BY_DEGREE: return "SS_BY_DEGREE";
    case Strategy::POWER_LAW: return "POWER_LAW";
    }
    return "?";
}

Strategy parse_strategy(const std::string& text) {
    std::string up = text;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "RANDOM") return Strategy::RANDOM;
    if (up == "TBS_BY_DEGREE") return Strategy::TBS_BY_DEGREE;
    if (up == "SS_BY_DEGREE") return Strategy::SS_BY_DEGREE;
    if (up == "POWER_LAW") return Strategy::POWER_LAW;
    throw std::invalid_argument("unknown placement strategy '" + text + "'");
}

std::int64_t ProfileAssignment::ss_count() const {
    return std::count(profiles.begin(), profiles.end(), Profile::SS);
}

std::int64_t ss_target_count(const Rational& theta, NodeId node_count) {
    if (theta < Rational::from_int(0) || theta > Rational::from_int(1))
        throw PlacementError("theta must lie in [0, 1], got " + theta.to_string());
    return theta.round_times(node_count);
}

namespace {

ProfileAssignment make(const Network& net, const Rational& theta, Strategy strategy, Profile fill) {
    ProfileAssignment a;
    a.profiles.assign(static_cast<std::size_t>(net.node_count()), fill);
    a.theta = theta;
    a.strategy = strategy;
    return a;
}

std::vector<double> degree_weights(const Network& net) {
    std::vector<double> w(static_cast<std::size_t>(net.node_count()));
    for (NodeId i = 0; i < net.node_count(); ++i)
        w[i] = net.degree(i);
    return w;
}

}  // namespace

std::vector<NodeId> weighted_sample_without_replacement(std::span<const double> weights, std::size_t count, Rng& rng) {
    if (count > weights.size())
        throw PlacementError("cannot draw " + std::to_string(count) + " of " + std::to_string(weights.size()) + " items");
    // Efraimidis-Spirakis keys log(u) / w: the top `count` keys have the law
    // of sequential proportional draws without replacement.
    struct Key {
        double key;
        double tie;
        NodeId id;
    };
    std::vector<Key> keys(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double u = rng.uniform_open0();
        const double k = weights[i] > 0.0 ? std::log(u) / weights[i] : -std::numeric_limits<double>::infinity();
        keys[i] = {k, rng.uniform01(), static_cast<NodeId>(i)};
    }
    count = std::min(count, keys.size());
    auto better = [](const Key& a, const Key& b) {
        if (a.key != b.key) return a.key > b.key;
        if (a.tie != b.tie) return a.tie > b.tie;
        return a.id < b.id;
    };
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(count), keys.end(), better);
    std::vector<NodeId> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = keys[i].id;
    return out;
}

ProfileAssignment assign_random(const Network& net, const Rational& theta, Rng& rng) {
    const auto ss = static_cast<std::size_t>(ss_target_count(theta, net.node_count()));
    auto a = make(net, theta, Strategy::RANDOM, Profile::TBS);
    std::vector<NodeId> order(a.profiles.size());
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < ss; ++i) {
        const std::size_t j = i + rng.uniform_index(order.size() - i);
        std::swap(order[i], order[j]);
        a.profiles[order[i]] = Profile::SS;
    }
    return a;
}

ProfileAssignment assign_tbs_by_degree(const Network& net, const Rational& theta, Rng& rng) {
    const auto ss = static_cast<std::size_t>(ss_target_count(theta, net.node_count()));
    auto a = make(net, theta, Strategy::TBS_BY_DEGREE, Profile::SS);
    const auto w = degree_weights(net);
    for (NodeId i : weighted_sample_without_replacement(w, a.profiles.size() - ss, rng))
        a.profiles[i] = Profile::TBS;
    return a;
}

ProfileAssignment assign_ss_by_degree(const Network& net, const Rational& theta, Rng& rng) {
    const auto ss = static_cast<std::size_t>(ss_target_count(theta, net.node_count()));
    auto a = make(net, theta, Strategy::SS_BY_DEGREE, Profile::TBS);
    const auto w = degree_weights(net);
    for (NodeId i : weighted_sample_without_replacement(w, ss, rng))
        a.profiles[i] = Profile::SS;
    return a;
}

std::map<std::int32_t, double> power_law_class_probabilities(const Network& net, const Rational& theta, double eta) {
    if (!(eta >= 0.0))
        throw PlacementError("eta must be >= 0");
    const double target = static_cast<double>(ss_target_count(theta, net.node_count()));

    std::map<std::int32_t, std::int64_t> class_size;
    for (NodeId i = 0; i < net.node_count(); ++i)
        ++class_size[net.degree(i)];
    auto weight = [eta](std::int32_t k) { return std::pow(static_cast<double>(std::max(k, 1)), -eta); };

    std::map<std::int32_t, double> p;
    std::map<std::int32_t, bool> saturated;
    for (const auto& [k, n] : class_size)
        saturated[k] = false;

    // Solve for c on the unsaturated classes; clip and repeat until stable.
    for (;;) {
        double fixed = 0.0, free_mass = 0.0;
        for (const auto& [k, n] : class_size) {
            if (saturated[k])
                fixed += static_cast<double>(n);
            else
                free_mass += static_cast<double>(n) * weight(k);
        }
        const double remaining = target - fixed;
        if (remaining < -1e-9 || (free_mass <= 0.0 && remaining > 1e-9))
            throw PlacementError("infeasible theta " + theta.to_string() + " for eta " + std::to_string(eta));
        const double c = free_mass > 0.0 ? std::max(0.0, remaining) / free_mass : 0.0;
        bool clipped = false;
        for (const auto& [k, n] : class_size) {
            if (!saturated[k] && c * weight(k) > 1.0) {
                saturated[k] = true;
                clipped = true;
            }
        }
        if (!clipped) {
            for (const auto& [k, n] : class_size)
                p[k] = saturated[k] ? 1.0 : c * weight(k);
            return p;
        }
    }
}

ProfileAssignment assign_power_law(const Network& net, const Rational& theta, double eta, Rng& rng) {
    const auto p = power_law_class_probabilities(net, theta, eta);
    const std::int64_t target = ss_target_count(theta, net.node_count());
    auto a = make(net, theta, Strategy::POWER_LAW, Profile::TBS);
    a.eta = eta;

    const std::size_t z = a.profiles.size();
    std::vector<double> pk(z);
    std::int64_t count = 0;
    for (std::size_t i = 0; i < z; ++i) {
        pk[i] = p.at(net.degree(static_cast<NodeId>(i)));
        if (rng.uniform01() < pk[i]) {
            a.profiles[i] = Profile::SS;
            ++count;
        }
    }

    // Fix the count: promote TBS nodes with weight p_k, or demote SS nodes
    // with weight 1 - p_k, so corrections follow the class profile.
    if (count != target) {
        const bool promote = count < target;
        const Profile from = promote ? Profile::TBS : Profile::SS;
        std::vector<NodeId> pool;
        std::vector<double> w;
        for (std::size_t i = 0; i < z; ++i) {
            if (a.profiles[i] == from) {
                pool.push_back(static_cast<NodeId>(i));
                w.push_back(promote ? pk[i] : 1.0 - pk[i]);
            }
        }
        const auto need = static_cast<std::size_t>(promote ? target - count : count - target);
        for (NodeId j : weighted_sample_without_replacement(w, need, rng))
            a.profiles[pool[j]] = promote ? Profile::SS : Profile::TBS;
    }
    return a;
}

ProfileAssignment assign(const Network& net, Strategy strategy, const Rational& theta, double eta, Rng& rng) {
    switch (strategy) {
    case Strategy::RANDOM: return assign_random(net, theta, rng);
    case Strategy::TBS_BY_DEGREE: return assign_tbs_by_degree(net, theta, rng);
    case Strategy::SS_BY_DEGREE: return assign_ss_by_degree(net, theta, rng);
    case Strategy::POWER_LAW: return assign_power_law(net, theta, eta, rng);
    }
    throw std::invalid_argument("unknown strategy");
}

std::map<std::int32_t, double> realized_theta_k(const ProfileAssignment& assignment, const Network& net) {
    if (assignment.profiles.size() != static_cast<std::size_t>(net.node_count()))
        throw PlacementError("assignment size does not match network");
    std::map<std::int32_t, std::pair<std::int64_t, std::int64_t>> tally;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        auto& [ss, all] = tally[net.degree(i)];
        ss += assignment.profiles[i] == Profile::SS;
        ++all;
    }
    std::map<std::int32_t, double> out;
    for (const auto& [k, t] : tally)
        out[k] = static_cast<double>(t.first) / static_cast<double>(t.second);
    return out;
}

void write_assignment(const ProfileAssignment& a, std::ostream& out) {
    for (std::size_t i = 0; i < a.profiles.size(); ++i)
        out << i << '\t' << (a.profiles[i] == Profile::SS ? "SS" : "TBS") << '\n';
}

ProfileAssignment read_assignment(std::istream& in, NodeId node_count) {
    ProfileAssignment a;
    a.profiles.assign(static_cast<std::size_t>(node_count), Profile::TBS);
    std::vector<bool> seen(static_cast<std::size_t>(node_count), false);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        long long i = -1;
        std::string label;
        if (!(ls >> i >> label) || i < 0 || i >= node_count || (label != "SS" && label != "TBS"))
            throw PlacementError("assignment line " + std::to_string(line_no) + ": expected 'node<TAB>SS|TBS'");
        if (seen[i])
            throw PlacementError("assignment line " + std::to_string(line_no) + ": node listed twice");
        seen[i] = true;
        a.profiles[i] = label == "SS" ? Profile::SS : Profile::TBS;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw PlacementError("assignment does not cover every node");
    a.theta = Rational(a.ss_count(), std::max<NodeId>(node_count, 1));
    return a;
}

}  // namespace mixcascade
