#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mixcascade/graph.hpp"
#include "mixcascade/placement.hpp"
#include "mixcascade/rational.hpp"

namespace mixcascade {

struct DegreeClass {
    double frequency = 0.0;  // D(k)
    double ss_fraction = 0.0;  // theta_k
};

// degree k -> (D(k), theta_k)
struct DegreeClassProfile {
    std::map<std::int32_t, DegreeClass> classes;

    void validate() const;
    double mean_degree() const;

    static DegreeClassProfile uniform(const std::map<std::int32_t, double>& distribution, double theta);
    static DegreeClassProfile from_assignment(const Network& net, const ProfileAssignment& assignment);
    // Poisson(mean) truncated where the remaining mass is below 1e-17.
    static DegreeClassProfile poisson(double mean, double theta);
};

class AnalyticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// sum_k D(k) k (k-1) theta_k / sum_k D(k) k. SS percolate when > 1.
double molloy_reed_ratio(const DegreeClassProfile& profile);

double er_percolation_threshold(double mean_degree);

// Homogeneous mean-field requirement theta > Gamma.
bool mean_field_tbs_condition(const Rational& theta, const Rational& gamma_threshold);

// eta > gamma - 3: hub-biased TBS placement can regularise the excess degree.
bool eta_regularization_condition(double eta, double gamma_exponent);

// (1 + alpha) / alpha.
double predicted_gamma(double alpha);

struct Closure {
    std::vector<std::uint8_t> active;
    std::int64_t size = 0;

    std::vector<NodeId> nodes() const;
};

// Smallest superset of the seeds closed under both activation rules.
Closure deterministic_closure(const Network& net, const ProfileAssignment& assignment,
                              const Rational& gamma_threshold, std::span<const NodeId> seeds);

}  // namespace mixcascade
