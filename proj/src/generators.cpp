#include "mixcascade/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "mutable_graph.hpp"

namespace mixcascade {

using detail::MutableGraph;

std::string to_string(Family f) {
    switch (f) {
    case Family::ER: return "ER";
    case Family::EXP: return "EXP";
    case Family::SFBA: return "SFBA";
    case Family::SF_ALPHA: return "SF_ALPHA";
    }
    return "?";
}

Family parse_family(const std::string& text) {
    std::string up = text;
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "ER") return Family::ER;
    if (up == "EXP") return Family::EXP;
    if (up == "SFBA" || up == "BA") return Family::SFBA;
    if (up == "SF_ALPHA" || up == "SFALPHA") return Family::SF_ALPHA;
    throw std::invalid_argument("unknown network family '" + text + "'");
}

void GeneratorSpec::validate() const {
    if (node_count < 4)
        throw std::invalid_argument("node_count must be at least 4");
    if (!(target_mean_degree > 0.0))
        throw std::invalid_argument("mean_degree must be positive");
    if (family == Family::ER && target_mean_degree > node_count - 1)
        throw std::invalid_argument("mean_degree must not exceed node_count - 1");
    if (family != Family::ER) {
        const double m = target_mean_degree / 2.0;
        if (m != std::floor(m) || m < 1.0)
            throw std::invalid_argument("growth models need an even integer mean_degree");
        if (node_count < static_cast<NodeId>(m) + 2)
            throw std::invalid_argument("node_count must exceed the seed clique size m + 1");
    }
    if (family == Family::SF_ALPHA && !(alpha >= 1.0 / 3.0 - 1e-12 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in [1/3, 1]");
}

void RewireSpec::validate() const {
    if (max_attempts && *max_attempts < 1)
        throw std::invalid_argument("rewire max_attempts must be >= 1");
    if (target_assortativity && !(std::abs(*target_assortativity) <= 1.0))
        throw std::invalid_argument("rewire target must satisfy |r| <= 1");
}

Network gnp(NodeId n, double p, Rng& rng) {
    std::vector<Edge> edges;
    if (p >= 1.0) {
        for (NodeId v = 1; v < n; ++v)
            for (NodeId w = 0; w < v; ++w)
                edges.emplace_back(w, v);
        return Network::from_edges(edges, n);
    }
    if (p <= 0.0)
        return Network::from_edges(edges, n);
    // Batagelj-Brandes geometric skipping over the pairs w < v.
    std::int64_t v = 1, w = -1;
    while (v < n) {
        const std::uint64_t skip = rng.geometric_failures(p);
        if (skip == UINT64_MAX)
            break;
        w += 1 + static_cast<std::int64_t>(skip);
        while (w >= v && v < n) {
            w -= v;
            ++v;
        }
        if (v < n)
            edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
    }
    return Network::from_edges(edges, n);
}

namespace {

constexpr int kErAttempts = 100;

// Joins every component to the largest one with a single random edge, then
// removes as many random non-bridge edges so that |E| is unchanged.
Network repair_connectivity(const Network& net, Rng& rng) {
    const auto label = component_labels(net);
    const auto giant = largest_component(net);
    const NodeId giant_label = label[giant.front()];

    std::vector<std::vector<NodeId>> members(label.size());
    for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] != giant_label)
            members[label[i]].push_back(static_cast<NodeId>(i));

    MutableGraph g(net);
    std::vector<Edge> joins;
    for (const auto& comp : members) {
        if (comp.empty())
            continue;
        const NodeId a = comp[rng.uniform_index(comp.size())];
        const NodeId b = giant[rng.uniform_index(giant.size())];
        g.add_edge(a, b);
        joins.emplace_back(std::min(a, b), std::max(a, b));
    }

    // Removal candidates are original edges of the giant component; a
    // removal is kept when its endpoints stay connected.
    std::size_t pending = joins.size();
    std::int64_t budget = 1000 * static_cast<std::int64_t>(pending) + 1000;
    while (pending > 0 && budget-- > 0) {
        const std::size_t slot = rng.uniform_index(g.edges().size());
        const auto [a, b] = g.edges()[slot];
        if (label[a] != giant_label || std::find(joins.begin(), joins.end(), Edge{a, b}) != joins.end())
            continue;
        g.remove_edge_at(slot);
        if (g.reaches_all(a, std::array<NodeId, 1>{b}))
            --pending;
        else
            g.add_edge(a, b);
    }
    return g.freeze();
}

void check_family(const GeneratorSpec& spec, Family expected) {
    if (spec.family != expected)
        throw std::invalid_argument("generator called with family " + to_string(spec.family));
    spec.validate();
}

// Seed clique on m + 1 nodes.
MutableGraph seed_clique(NodeId z, int m) {
    MutableGraph g(z);
    for (NodeId i = 0; i <= m; ++i)
        for (NodeId j = i + 1; j <= m; ++j)
            g.add_edge(i, j);
    return g;
}

// Draws `m` distinct targets by repeatedly calling draw(); redraws on
// repeats, which is sequential sampling without replacement.
template <typename Draw>
void distinct_targets(int m, std::vector<NodeId>& out, Draw&& draw) {
    out.clear();
    while (static_cast<int>(out.size()) < m) {
        const NodeId t = draw();
        if (std::find(out.begin(), out.end(), t) == out.end())
            out.push_back(t);
    }
}

}  // namespace

Network gen_er(const GeneratorSpec& spec, Rng& rng, ErConnectivity policy) {
    check_family(spec, Family::ER);
    const NodeId z = spec.node_count;
    const double p = std::min(1.0, spec.target_mean_degree / (z - 1));
    Network net;
    for (int attempt = 0; attempt < kErAttempts; ++attempt) {
        net = gnp(z, p, rng);
        if (is_connected(net))
            return net;
    }
    if (policy == ErConnectivity::Regenerate)
        throw GeneratorError("no connected G(Z, p) instance in " + std::to_string(kErAttempts) + " attempts");
    return repair_connectivity(net, rng);
}

Network gen_ba(const GeneratorSpec& spec, Rng& rng) {
    check_family(spec, Family::SFBA);
    const int m = spec.attachments();
    const NodeId z = spec.node_count;
    MutableGraph g = seed_clique(z, m);
    // Every edge endpoint once: uniform draws are degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(static_cast<std::size_t>(z) * 2 * m);
    for (const auto& [a, b] : g.edges()) {
        endpoints.push_back(a);
        endpoints.push_back(b);
    }
    std::vector<NodeId> chosen;
    for (NodeId v = m + 1; v < z; ++v) {
        distinct_targets(m, chosen, [&] { return endpoints[rng.uniform_index(endpoints.size())]; });
        for (NodeId t : chosen) {
            g.add_edge(v, t);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return g.freeze();
}

Network gen_exp(const GeneratorSpec& spec, Rng& rng) {
    check_family(spec, Family::EXP);
    const int m = spec.attachments();
    const NodeId z = spec.node_count;
    MutableGraph g = seed_clique(z, m);
    std::vector<NodeId> chosen;
    for (NodeId v = m + 1; v < z; ++v) {
        distinct_targets(m, chosen, [&] { return static_cast<NodeId>(rng.uniform_index(static_cast<std::uint64_t>(v))); });
        for (NodeId t : chosen)
            g.add_edge(v, t);
    }
    return g.freeze();
}

Network gen_age_rank_sf(const GeneratorSpec& spec, Rng& rng) {
    check_family(spec, Family::SF_ALPHA);
    const int m = spec.attachments();
    const NodeId z = spec.node_count;
    MutableGraph g = seed_clique(z, m);
    // Node v has age rank t = v + 1 and fixed weight t^-alpha.
    std::vector<double> cumulative;
    cumulative.reserve(static_cast<std::size_t>(z));
    double total = 0.0;
    for (NodeId v = 0; v <= m; ++v) {
        total += std::pow(static_cast<double>(v + 1), -spec.alpha);
        cumulative.push_back(total);
    }
    std::vector<NodeId> chosen;
    for (NodeId v = m + 1; v < z; ++v) {
        distinct_targets(m, chosen, [&] {
            const double u = rng.uniform01() * total;
            auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            if (it == cumulative.end())
                --it;
            return static_cast<NodeId>(it - cumulative.begin());
        });
        for (NodeId t : chosen)
            g.add_edge(v, t);
        total += std::pow(static_cast<double>(v + 1), -spec.alpha);
        cumulative.push_back(total);
    }
    return g.freeze();
}

Network generate(const GeneratorSpec& spec) {
    Rng rng(spec.rng_seed);
    switch (spec.family) {
    case Family::ER: return gen_er(spec, rng);
    case Family::EXP: return gen_exp(spec, rng);
    case Family::SFBA: return gen_ba(spec, rng);
    case Family::SF_ALPHA: return gen_age_rank_sf(spec, rng);
    }
    throw std::invalid_argument("unknown family");
}

RewireResult rewire_assortativity(const Network& net, const RewireSpec& spec, Rng& rng) {
    spec.validate();
    if (!is_connected(net))
        throw std::invalid_argument("rewiring requires a connected network");

    RewireResult result;
    MutableGraph g(net);
    const std::size_t edge_total = g.edges().size();
    const std::int64_t budget = spec.max_attempts.value_or(10 * static_cast<std::int64_t>(edge_total));

    // r = (S / E - mean^2) / var over edge-endpoint degrees. Only S changes.
    double sum_k = 0.0, sum_kk = 0.0, s = 0.0;
    for (const auto& [a, b] : g.edges()) {
        const double ka = g.degree(a), kb = g.degree(b);
        sum_k += ka + kb;
        sum_kk += ka * ka + kb * kb;
        s += ka * kb;
    }
    const double ends = 2.0 * static_cast<double>(edge_total);
    const double mean = edge_total ? sum_k / ends : 0.0;
    const double var = edge_total ? sum_kk / ends - mean * mean : 0.0;
    const bool defined = var > 1e-12 * std::max(1.0, mean * mean);
    auto current_r = [&] { return (2.0 * s / ends - mean * mean) / var; };
    const double sign = spec.mode == RewireMode::Assortative ? 1.0 : -1.0;
    auto at_target = [&] {
        return defined && spec.target_assortativity && sign * current_r() >= std::abs(*spec.target_assortativity);
    };

    if (edge_total >= 2 && defined) {
        while (result.attempts < budget && !at_target()) {
            ++result.attempts;
            const std::size_t e1 = rng.uniform_index(edge_total);
            const std::size_t e2 = rng.uniform_index(edge_total);
            if (e1 == e2)
                continue;
            const auto [a, b] = g.edges()[e1];
            const auto [c, d] = g.edges()[e2];
            if (a == c || a == d || b == c || b == d)
                continue;

            std::array<NodeId, 4> q{a, b, c, d};
            std::sort(q.begin(), q.end(), [&](NodeId x, NodeId y) {
                return g.degree(x) != g.degree(y) ? g.degree(x) > g.degree(y) : x < y;
            });
            Edge n1, n2;
            if (spec.mode == RewireMode::Assortative) {
                n1 = {q[0], q[1]};
                n2 = {q[2], q[3]};
            } else {
                n1 = {q[0], q[3]};
                n2 = {q[1], q[2]};
            }
            auto same = [](Edge x, NodeId u, NodeId v) {
                return (x.first == u && x.second == v) || (x.first == v && x.second == u);
            };
            if ((same(n1, a, b) && same(n2, c, d)) || (same(n1, c, d) && same(n2, a, b)))
                continue;
            if (g.has_edge(n1.first, n1.second) || g.has_edge(n2.first, n2.second))
                continue;

            g.replace_edge(e1, n1.first, n1.second);
            g.replace_edge(e2, n2.first, n2.second);
            if (!g.reaches_all(a, std::array<NodeId, 3>{b, c, d})) {
                g.replace_edge(e1, a, b);
                g.replace_edge(e2, c, d);
                continue;
            }
            const auto prod = [&](NodeId x, NodeId y) { return static_cast<double>(g.degree(x)) * g.degree(y); };
            s += prod(n1.first, n1.second) + prod(n2.first, n2.second) - prod(a, b) - prod(c, d);
            ++result.accepted;
        }
    }
    result.reached_target = at_target();
    result.network = g.freeze();
    result.assortativity = assortativity(result.network);
    return result;
}

double hurwitz_zeta(double s, double q) {
    if (!(s > 1.0) || !(q > 0.0))
        throw std::invalid_argument("hurwitz_zeta needs s > 1, q > 0");
    // Direct sum to N, then Euler-Maclaurin for the tail.
    constexpr int n = 20;
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
        sum += std::pow(q + k, -s);
    const double a = q + n;
    sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    // B2/2!, B4/4!, B6/6!, B8/8!, B10/10!
    constexpr std::array<double, 5> coeff{1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0};
    double rising = s;  // s (s+1) ... (s+2j-2)
    double power = std::pow(a, -s - 1.0);
    for (std::size_t j = 0; j < coeff.size(); ++j) {
        sum += coeff[j] * rising * power;
        rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
        power /= a * a;
    }
    return sum;
}

double fit_discrete_power_law(std::span<const std::int32_t> samples, std::int32_t k_min) {
    if (k_min < 1)
        throw FitError("k_min must be >= 1");
    std::size_t n = 0;
    double sum_log = 0.0;
    std::int32_t lo = INT32_MAX, hi = INT32_MIN;
    for (std::int32_t k : samples) {
        if (k < k_min)
            continue;
        ++n;
        sum_log += std::log(static_cast<double>(k));
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    if (n < 100)
        throw FitError("insufficient tail sample: " + std::to_string(n) + " values >= k_min, need 100");
    if (lo == hi)
        throw FitError("degenerate sample: all values equal");

    const double dn = static_cast<double>(n);
    auto neg_loglik = [&](double g) { return g * sum_log + dn * std::log(hurwitz_zeta(g, k_min)); };

    // Golden-section search; the log-likelihood is concave in gamma.
    double a = 1.0 + 1e-6, b = 20.0;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = neg_loglik(c), fd = neg_loglik(d);
    while (b - a > 1e-10) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = neg_loglik(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = neg_loglik(d);
        }
    }
    return 0.5 * (a + b);
}

double fit_ccdf_power_law(std::span<const std::int32_t> samples, std::int32_t k_min) {
    if (k_min < 1)
        throw FitError("k_min must be >= 1");
    std::vector<std::int32_t> tail;
    for (std::int32_t k : samples)
        if (k >= k_min)
            tail.push_back(k);
    std::sort(tail.begin(), tail.end());
    const double n = static_cast<double>(tail.size());

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t points = 0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (i > 0 && tail[i] == tail[i - 1])
            continue;
        // tail.size() - i values are >= tail[i]
        const double x = std::log(static_cast<double>(tail[i]));
        const double y = std::log(static_cast<double>(tail.size() - i) / n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++points;
    }
    if (points < 3)
        throw FitError("need at least 3 distinct values >= k_min, got " + std::to_string(points));
    const double m = static_cast<double>(points);
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return 1.0 - slope;
}

double fit_power_law_exponent(const Network& net, std::int32_t k_min, PowerLawEstimator estimator) {
    const auto deg = net.degrees();
    if (estimator == PowerLawEstimator::DiscreteMle)
        return fit_discrete_power_law(deg, k_min);
    return fit_ccdf_power_law(deg, k_min);
}

std::string network_file_name(const GeneratorSpec& spec) {
    std::ostringstream os;
    os << to_string(spec.family) << "_Z" << spec.node_count << "_k" << spec.target_mean_degree << "_a"
       << (spec.family == Family::SF_ALPHA ? spec.alpha : 0.0) << "_s" << spec.rng_seed << ".edges";
    return os.str();
}

}  // namespace mixcascade
