#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixcascade/graph.hpp"
#include "mixcascade/placement.hpp"
#include "mixcascade/rational.hpp"
#include "mixcascade/rng.hpp"

namespace mixcascade {

struct CascadeConfig {
    Rational gamma_threshold;  // TBS activate when active/degree > this
    std::int64_t n_seeds = 1;
    std::optional<std::uint64_t> max_iterations;     // default Z * 10^6
    std::optional<std::uint64_t> stagnation_window;  // default Z * 10^2
    std::uint64_t rng_seed = 0;

    std::uint64_t max_iterations_for(NodeId z) const {
        return max_iterations.value_or(static_cast<std::uint64_t>(z) * 1'000'000ULL);
    }
    std::uint64_t stagnation_window_for(NodeId z) const {
        return stagnation_window.value_or(static_cast<std::uint64_t>(z) * 100ULL);
    }
    void validate(NodeId z) const;
};

struct CascadeState {
    std::vector<std::uint8_t> active;
    std::int64_t active_count = 0;
    std::uint64_t iteration = 0;

    std::vector<NodeId> active_nodes() const;
};

enum class Termination { MAX_ITERATIONS, FULL_ACTIVATION, STAGNATION };
std::string to_string(Termination t);

struct CascadeResult {
    std::int64_t final_active = 0;
    double cascade_size = 0.0;
    Termination termination = Termination::STAGNATION;
    std::uint64_t iterations_used = 0;
};

class CascadeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// n_seeds distinct nodes, uniform without replacement, sorted.
std::vector<NodeId> select_seeds(const Network& net, std::int64_t n_seeds, Rng& rng);

// Asynchronous single-site dynamics. Each iteration picks a uniform node; an
// inactive SS copies a uniform neighbour's state, an inactive TBS activates
// when its active-neighbour fraction strictly exceeds the threshold.
//
// This runner skips the unproductive iterations in one geometric draw and
// picks the activating node with probability proportional to its per-
// iteration activation chance, so the joint law of the final state,
// termination reason and iteration count equals the literal loop's.
CascadeResult run_cascade(const Network& net, const ProfileAssignment& assignment, const CascadeConfig& config,
                          std::span<const NodeId> seeds, Rng& rng, CascadeState* final_state = nullptr);

struct StepwiseOptions {
    // Emit "iteration<TAB>node<TAB>event" per iteration.
    std::ostream* trace = nullptr;
    // Once no inactive node can ever change, jump to the iteration at which
    // the window would elapse. Result is unchanged.
    bool early_exit_when_closed = true;
};

// Literal iteration-by-iteration reference runner.
CascadeResult run_cascade_stepwise(const Network& net, const ProfileAssignment& assignment,
                                   const CascadeConfig& config, std::span<const NodeId> seeds, Rng& rng,
                                   const StepwiseOptions& options = {}, CascadeState* final_state = nullptr);

// Fraction of active neighbours; the node must have degree >= 1.
double active_neighbor_fraction(const CascadeState& state, const Network& net, NodeId node);

// Exact test active/degree > threshold; false for degree-0 nodes.
bool threshold_exceeded(const CascadeState& state, const Network& net, NodeId node, const Rational& threshold);

}  // namespace mixcascade
