#include "mixcascade/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mixcascade {

void DegreeClassProfile::validate() const {
    double total = 0.0;
    for (const auto& [k, c] : classes) {
        if (k < 0 || c.frequency < 0.0 || c.ss_fraction < 0.0 || c.ss_fraction > 1.0)
            throw AnalyticsError("degree class " + std::to_string(k) + " out of range");
        total += c.frequency;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw AnalyticsError("degree frequencies do not sum to 1");
}

double DegreeClassProfile::mean_degree() const {
    double m = 0.0;
    for (const auto& [k, c] : classes)
        m += k * c.frequency;
    return m;
}

DegreeClassProfile DegreeClassProfile::uniform(const std::map<std::int32_t, double>& distribution, double theta) {
    DegreeClassProfile p;
    for (const auto& [k, d] : distribution)
        p.classes[k] = {d, theta};
    return p;
}

DegreeClassProfile DegreeClassProfile::from_assignment(const Network& net, const ProfileAssignment& assignment) {
    const auto stats = degree_stats(net);
    const auto theta_k = realized_theta_k(assignment, net);
    DegreeClassProfile p;
    for (const auto& [k, d] : stats.distribution)
        p.classes[k] = {d, theta_k.at(k)};
    return p;
}

DegreeClassProfile DegreeClassProfile::poisson(double mean, double theta) {
    DegreeClassProfile p;
    double term = std::exp(-mean);
    double mass = 0.0;
    for (std::int32_t k = 0;; ++k) {
        p.classes[k] = {term, theta};
        mass += term;
        if (k > mean && 1.0 - mass < 1e-17)
            break;
        term *= mean / (k + 1);
        if (term == 0.0)
            break;
    }
    // Fold rounding residue into the normalisation.
    for (auto& [k, c] : p.classes)
        c.frequency /= mass;
    return p;
}

double molloy_reed_ratio(const DegreeClassProfile& profile) {
    profile.validate();
    double top = 0.0, bottom = 0.0;
    for (const auto& [k, c] : profile.classes) {
        const double kd = k;
        top += c.frequency * kd * (kd - 1.0) * c.ss_fraction;
        bottom += c.frequency * kd;
    }
    if (!(bottom > 0.0))
        throw AnalyticsError("zero mean degree");
    return top / bottom;
}

double er_percolation_threshold(double mean_degree) {
    if (!(mean_degree > 0.0))
        throw AnalyticsError("mean degree must be positive");
    return 1.0 / mean_degree;
}

bool mean_field_tbs_condition(const Rational& theta, const Rational& gamma_threshold) {
    return theta > gamma_threshold;
}

bool eta_regularization_condition(double eta, double gamma_exponent) {
    // Decimal inputs such as 3.3 are not exact in binary, so a difference
    // within rounding noise counts as a tie, which fails the strict test.
    const double margin = 1e-12 * std::max({1.0, std::abs(eta), std::abs(gamma_exponent)});
    return eta - (gamma_exponent - 3.0) > margin;
}

double predicted_gamma(double alpha) {
    if (!(alpha > 0.0))
        throw AnalyticsError("alpha must be positive");
    return (1.0 + alpha) / alpha;
}

std::vector<NodeId> Closure::nodes() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < active.size(); ++i)
        if (active[i])
            out.push_back(static_cast<NodeId>(i));
    return out;
}

Closure deterministic_closure(const Network& net, const ProfileAssignment& assignment,
                              const Rational& gamma_threshold, std::span<const NodeId> seeds) {
    const NodeId z = net.node_count();
    if (assignment.profiles.size() != static_cast<std::size_t>(z))
        throw AnalyticsError("assignment size does not match network");

    Closure c;
    c.active.assign(static_cast<std::size_t>(z), 0);
    std::vector<std::int32_t> on(static_cast<std::size_t>(z), 0);
    std::deque<NodeId> work;
    auto add = [&](NodeId i) {
        if (c.active[i])
            return;
        c.active[i] = 1;
        ++c.size;
        work.push_back(i);
    };
    for (NodeId s : seeds) {
        if (s < 0 || s >= z)
            throw AnalyticsError("seed out of range");
        add(s);
    }
    // Worklist fixed point: only neighbours of a newly added node can change.
    while (!work.empty()) {
        const NodeId u = work.front();
        work.pop_front();
        for (NodeId v : net.neighbors(u)) {
            ++on[v];
            if (c.active[v])
                continue;
            const bool joins = assignment.profiles[v] == Profile::SS
                                   ? on[v] >= 1
                                   : gamma_threshold.exceeded_by(on[v], net.degree(v));
            if (joins)
                add(v);
        }
    }
    return c;
}

}  // namespace mixcascade
