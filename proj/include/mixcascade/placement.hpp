#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mixcascade/graph.hpp"
#include "mixcascade/rational.hpp"
#include "mixcascade/rng.hpp"

namespace mixcascade {

enum class Profile : std::uint8_t { SS, TBS };

enum class Strategy { RANDOM, TBS_BY_DEGREE, SS_BY_DEGREE, POWER_LAW };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& text);

struct ProfileAssignment {
    std::vector<Profile> profiles;
    Rational theta;
    Strategy strategy = Strategy::RANDOM;
    double eta = 0.0;

    std::int64_t ss_count() const;
};

class PlacementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// round(theta * Z), halves up.
std::int64_t ss_target_count(const Rational& theta, NodeId node_count);

ProfileAssignment assign_random(const Network& net, const Rational& theta, Rng& rng);
ProfileAssignment assign_tbs_by_degree(const Network& net, const Rational& theta, Rng& rng);
ProfileAssignment assign_ss_by_degree(const Network& net, const Rational& theta, Rng& rng);
ProfileAssignment assign_power_law(const Network& net, const Rational& theta, double eta, Rng& rng);

ProfileAssignment assign(const Network& net, Strategy strategy, const Rational& theta, double eta, Rng& rng);

// Per-class SS probability p_k = c k^-eta, clipped to [0, 1], with c solved
// so that the expected SS count equals round(theta * Z). Degree-0 nodes are
// weighted like degree 1.
std::map<std::int32_t, double> power_law_class_probabilities(const Network& net, const Rational& theta, double eta);

// Chooses `count` indices by sequential draws without replacement, each draw
// proportional to weight among the remaining indices. Zero-weight indices
// are taken uniformly once positive weight is exhausted.
std::vector<NodeId> weighted_sample_without_replacement(std::span<const double> weights, std::size_t count, Rng& rng);

// Empirical SS fraction per degree class.
std::map<std::int32_t, double> realized_theta_k(const ProfileAssignment& assignment, const Network& net);

// "node_index<TAB>{SS|TBS}" per line.
void write_assignment(const ProfileAssignment& a, std::ostream& out);
ProfileAssignment read_assignment(std::istream& in, NodeId node_count);

}  // namespace mixcascade
