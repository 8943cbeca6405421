#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "mixcascade/graph.hpp"
#include "mixcascade/rng.hpp"

namespace mixcascade {

enum class Family { ER, EXP, SFBA, SF_ALPHA };

std::string to_string(Family f);
Family parse_family(const std::string& text);

struct GeneratorSpec {
    Family family = Family::ER;
    NodeId node_count = 1000;
    double target_mean_degree = 4.0;
    double alpha = 1.0;  // SF_ALPHA only
    std::uint64_t rng_seed = 0;

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
    // Edges each arriving node brings in the growth models.
    int attachments() const { return static_cast<int>(target_mean_degree / 2.0); }
};

// How gen_er deals with a disconnected G(Z, p) draw.
enum class ErConnectivity {
    // Redraw up to 100 times, then fail.
    Regenerate,
    // Redraw up to 100 times, then join the stray components to the largest
    // one and delete the same number of non-bridge edges, keeping |E|.
    RegenerateThenRepair,
};

class GeneratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Network gen_er(const GeneratorSpec& spec, Rng& rng, ErConnectivity policy = ErConnectivity::RegenerateThenRepair);
Network gen_ba(const GeneratorSpec& spec, Rng& rng);
Network gen_exp(const GeneratorSpec& spec, Rng& rng);
Network gen_age_rank_sf(const GeneratorSpec& spec, Rng& rng);

// Dispatches on spec.family with a private stream seeded from spec.rng_seed.
Network generate(const GeneratorSpec& spec);

// Single G(Z, p) draw, no connectivity handling.
Network gnp(NodeId node_count, double p, Rng& rng);

enum class RewireMode { Assortative, Disassortative };

struct RewireSpec {
    RewireMode mode = RewireMode::Assortative;
    std::optional<std::int64_t> max_attempts;  // default 10 * |E|
    std::optional<double> target_assortativity = 0.3;

    void validate() const;
};

struct RewireResult {
    Network network;
    std::optional<double> assortativity;
    std::int64_t attempts = 0;
    std::int64_t accepted = 0;
    bool reached_target = false;
};

// Degree-preserving Xulvi-Brunet/Sokolov reshuffling that never disconnects
// the graph. Stops at the attempt budget or once r has reached the target
// in the requested direction.
RewireResult rewire_assortativity(const Network& net, const RewireSpec& spec, Rng& rng);

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Discrete power-law MLE with fixed lower cutoff, over samples >= k_min.
double fit_discrete_power_law(std::span<const std::int32_t> samples, std::int32_t k_min);

// Least-squares slope of ln P(K >= k) against ln k over the distinct observed
// values k >= k_min; returns 1 - slope. Needs at least three distinct values.
double fit_ccdf_power_law(std::span<const std::int32_t> samples, std::int32_t k_min);

enum class PowerLawEstimator { CcdfRegression, DiscreteMle };

double fit_power_law_exponent(const Network& net, std::int32_t k_min = 2,
                              PowerLawEstimator estimator = PowerLawEstimator::CcdfRegression);

// Hurwitz zeta sum_{k>=0} (q + k)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

std::string network_file_name(const GeneratorSpec& spec);

}  // namespace mixcascade
