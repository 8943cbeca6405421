#include "mixcascade/cascade.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace mixcascade {

std::string to_string(Termination t) {
    switch (t) {
    case Termination::MAX_ITERATIONS: return "MAX_ITERATIONS";
    case Termination::FULL_ACTIVATION: return "FULL_ACTIVATION";
    case Termination::STAGNATION: return "STAGNATION";
    }
    return "?";
}

void CascadeConfig::validate(NodeId z) const {
    if (gamma_threshold < Rational::from_int(0) || gamma_threshold > Rational::from_int(1))
        throw CascadeError("threshold must lie in [0, 1]");
    if (n_seeds < 1 || n_seeds > z)
        throw CascadeError("n_seeds must lie in [1, Z], got " + std::to_string(n_seeds));
    const auto window = stagnation_window_for(z);
    if (window < 1 || max_iterations_for(z) < window)
        throw CascadeError("need max_iterations >= stagnation_window >= 1");
}

std::vector<NodeId> CascadeState::active_nodes() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < active.size(); ++i)
        if (active[i])
            out.push_back(static_cast<NodeId>(i));
    return out;
}

std::vector<NodeId> select_seeds(const Network& net, std::int64_t n_seeds, Rng& rng) {
    const NodeId z = net.node_count();
    if (n_seeds < 1 || n_seeds > z)
        throw CascadeError("n_seeds must lie in [1, Z], got " + std::to_string(n_seeds));
    std::vector<NodeId> order(static_cast<std::size_t>(z));
    std::iota(order.begin(), order.end(), 0);
    for (std::int64_t i = 0; i < n_seeds; ++i) {
        const auto j = static_cast<std::size_t>(i) + rng.uniform_index(static_cast<std::uint64_t>(z - i));
        std::swap(order[i], order[j]);
    }
    order.resize(static_cast<std::size_t>(n_seeds));
    std::sort(order.begin(), order.end());
    return order;
}

double active_neighbor_fraction(const CascadeState& state, const Network& net, NodeId node) {
    const auto nb = net.neighbors(node);
    if (nb.empty())
        throw CascadeError("active neighbour fraction undefined for isolated node " + std::to_string(node));
    const auto on = std::count_if(nb.begin(), nb.end(), [&](NodeId j) { return state.active[j] != 0; });
    return static_cast<double>(on) / static_cast<double>(nb.size());
}

bool threshold_exceeded(const CascadeState& state, const Network& net, NodeId node, const Rational& threshold) {
    const auto nb = net.neighbors(node);
    if (nb.empty())
        return false;
    const auto on = std::count_if(nb.begin(), nb.end(), [&](NodeId j) { return state.active[j] != 0; });
    return threshold.exceeded_by(on, static_cast<std::int64_t>(nb.size()));
}

namespace {

void check_inputs(const Network& net, const ProfileAssignment& assignment, const CascadeConfig& config,
                  std::span<const NodeId> seeds) {
    const NodeId z = net.node_count();
    if (assignment.profiles.size() != static_cast<std::size_t>(z))
        throw CascadeError("assignment size does not match network");
    config.validate(z);
    if (seeds.empty())
        throw CascadeError("at least one seed is required");
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(z), 0);
    for (NodeId s : seeds) {
        if (s < 0 || s >= z)
            throw CascadeError("seed " + std::to_string(s) + " out of range");
        if (seen[s]++)
            throw CascadeError("seed " + std::to_string(s) + " repeated");
    }
}

// Shared bookkeeping: active flags plus active-neighbour counts.
struct Dynamics {
    const Network& net;
    const std::vector<Profile>& profile;
    const Rational& gamma;
    CascadeState state;
    std::vector<std::int32_t> active_nbrs;

    Dynamics(const Network& n, const ProfileAssignment& a, const Rational& g)
        : net(n), profile(a.profiles), gamma(g), active_nbrs(static_cast<std::size_t>(n.node_count()), 0) {
        state.active.assign(static_cast<std::size_t>(n.node_count()), 0);
    }

    // Per-iteration activation probability of node i given it was picked.
    double rate(NodeId i) const {
        if (state.active[i])
            return 0.0;
        const std::int32_t k = net.degree(i);
        if (k == 0)
            return 0.0;
        if (profile[i] == Profile::SS)
            return static_cast<double>(active_nbrs[i]) / k;
        return gamma.exceeded_by(active_nbrs[i], k) ? 1.0 : 0.0;
    }

    void activate(NodeId i) {
        state.active[i] = 1;
        ++state.active_count;
        for (NodeId j : net.neighbors(i))
            ++active_nbrs[j];
    }
};

class Fenwick {
public:
    explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0), value_(n, 0.0) {}

    void set(std::size_t i, double v) {
        const double delta = v - value_[i];
        if (delta == 0.0)
            return;
        value_[i] = v;
        for (std::size_t x = i + 1; x < tree_.size(); x += x & (~x + 1))
            tree_[x] += delta;
    }
    double value(std::size_t i) const { return value_[i]; }

    double total() const {
        double s = 0.0;
        for (std::size_t x = tree_.size() - 1; x > 0; x -= x & (~x + 1))
            s += tree_[x];
        return s;
    }

    // Smallest index whose inclusive prefix sum exceeds u.
    std::size_t find(double u) const {
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 < tree_.size())
            step *= 2;
        for (; step > 0; step /= 2) {
            if (pos + step < tree_.size() && tree_[pos + step] <= u) {
                pos += step;
                u -= tree_[pos];
            }
        }
        return std::min(pos, value_.size() - 1);
    }

private:
    std::vector<double> tree_;
    std::vector<double> value_;
};

CascadeResult finish(const Dynamics& d, Termination t, std::uint64_t it, CascadeState* out) {
    CascadeResult r;
    r.final_active = d.state.active_count;
    r.cascade_size = static_cast<double>(d.state.active_count) / static_cast<double>(d.net.node_count());
    r.termination = t;
    r.iterations_used = it;
    if (out) {
        *out = d.state;
        out->iteration = it;
    }
    return r;
}

}  // namespace

CascadeResult run_cascade(const Network& net, const ProfileAssignment& assignment, const CascadeConfig& config,
                          std::span<const NodeId> seeds, Rng& rng, CascadeState* final_state) {
    check_inputs(net, assignment, config, seeds);
    const NodeId z = net.node_count();
    const std::uint64_t max_it = config.max_iterations_for(z);
    const std::uint64_t window = config.stagnation_window_for(z);

    Dynamics d(net, assignment, config.gamma_threshold);
    for (NodeId s : seeds)
        d.activate(s);
    if (d.state.active_count == z)
        return finish(d, Termination::FULL_ACTIVATION, 0, final_state);

    Fenwick rates(static_cast<std::size_t>(z));
    std::int64_t live = 0;  // nodes with positive rate
    auto refresh = [&](NodeId i) {
        const double before = rates.value(i);
        const double after = d.rate(i);
        live += (after > 0.0) - (before > 0.0);
        rates.set(i, after);
    };
    for (NodeId i = 0; i < z; ++i)
        refresh(i);

    std::uint64_t it = 0, last_change = 0;
    const double zd = static_cast<double>(z);
    for (;;) {
        const double total = live > 0 ? rates.total() : 0.0;
        const std::uint64_t failures = rng.geometric_failures(std::min(1.0, total / zd));
        const std::uint64_t stop_stagnation = last_change + window;
        const std::uint64_t stop = std::min(stop_stagnation, max_it);
        if (failures == UINT64_MAX || failures >= stop - it) {
            const Termination t = max_it <= stop_stagnation ? Termination::MAX_ITERATIONS : Termination::STAGNATION;
            return finish(d, t, stop, final_state);
        }
        it += failures + 1;

        NodeId pick;
        do {
            pick = static_cast<NodeId>(rates.find(rng.uniform01() * total));
        } while (rates.value(pick) <= 0.0);

        d.activate(pick);
        refresh(pick);
        for (NodeId j : net.neighbors(pick))
            refresh(j);
        last_change = it;

        if (d.state.active_count == z)
            return finish(d, Termination::FULL_ACTIVATION, it, final_state);
        if (it >= max_it)
            return finish(d, Termination::MAX_ITERATIONS, it, final_state);
    }
}

CascadeResult run_cascade_stepwise(const Network& net, const ProfileAssignment& assignment,
                                   const CascadeConfig& config, std::span<const NodeId> seeds, Rng& rng,
                                   const StepwiseOptions& options, CascadeState* final_state) {
    check_inputs(net, assignment, config, seeds);
    const NodeId z = net.node_count();
    const std::uint64_t max_it = config.max_iterations_for(z);
    const std::uint64_t window = config.stagnation_window_for(z);

    Dynamics d(net, assignment, config.gamma_threshold);
    for (NodeId s : seeds)
        d.activate(s);
    if (d.state.active_count == z)
        return finish(d, Termination::FULL_ACTIVATION, 0, final_state);

    std::int64_t live = 0;
    std::vector<std::uint8_t> is_live(static_cast<std::size_t>(z), 0);
    auto refresh = [&](NodeId i) {
        const std::uint8_t now = d.rate(i) > 0.0;
        live += now - is_live[i];
        is_live[i] = now;
    };
    if (options.early_exit_when_closed)
        for (NodeId i = 0; i < z; ++i)
            refresh(i);

    std::uint64_t it = 0, last_change = 0;
    for (;;) {
        if (options.early_exit_when_closed && live == 0) {
            const std::uint64_t stop_stagnation = last_change + window;
            if (max_it <= stop_stagnation)
                return finish(d, Termination::MAX_ITERATIONS, max_it, final_state);
            return finish(d, Termination::STAGNATION, stop_stagnation, final_state);
        }

        ++it;
        const auto i = static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(z)));
        const char* event = "skip_active";
        bool fire = false;
        if (!d.state.active[i]) {
            const auto nb = net.neighbors(i);
            if (nb.empty()) {
                event = "isolated";
            } else if (d.profile[i] == Profile::SS) {
                const NodeId j = nb[rng.uniform_index(nb.size())];
                fire = d.state.active[j] != 0;
                event = fire ? "ss_copy_active" : "ss_copy_inactive";
            } else {
                fire = threshold_exceeded(d.state, net, i, config.gamma_threshold);
                event = fire ? "tbs_activate" : "tbs_below";
            }
        }
        if (options.trace)
            *options.trace << it << '\t' << i << '\t' << event << '\n';
        if (fire) {
            d.activate(i);
            last_change = it;
            if (options.early_exit_when_closed) {
                refresh(i);
                for (NodeId j : net.neighbors(i))
                    refresh(j);
            }
        }

        if (d.state.active_count == z)
            return finish(d, Termination::FULL_ACTIVATION, it, final_state);
        if (it >= max_it)
            return finish(d, Termination::MAX_ITERATIONS, it, final_state);
        if (it - last_change >= window)
            return finish(d, Termination::STAGNATION, it, final_state);
    }
}

}  // namespace mixcascade
