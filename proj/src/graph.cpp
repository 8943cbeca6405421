#include "mixcascade/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mixcascade {

namespace {

std::string pair_text(NodeId i, NodeId j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

Network Network::from_edges(std::span<const Edge> edges, NodeId node_count) {
    if (node_count < 0)
        throw GraphError("negative node count");

    std::vector<std::int64_t> deg(static_cast<std::size_t>(node_count) + 1, 0);
    for (const auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= node_count || j >= node_count)
            throw GraphError("node index out of range in edge " + pair_text(i, j));
        if (i == j)
            throw GraphError("self-loop " + pair_text(i, j));
        ++deg[i];
        ++deg[j];
    }

    Network net;
    net.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (NodeId i = 0; i < node_count; ++i)
        net.offsets_[i + 1] = net.offsets_[i] + deg[i];
    net.targets_.resize(static_cast<std::size_t>(net.offsets_.back()));

    std::vector<std::int64_t> fill(net.offsets_.begin(), net.offsets_.end() - 1);
    for (const auto& [i, j] : edges) {
        net.targets_[fill[i]++] = j;
        net.targets_[fill[j]++] = i;
    }
    for (NodeId i = 0; i < node_count; ++i) {
        auto first = net.targets_.begin() + net.offsets_[i];
        auto last = net.targets_.begin() + net.offsets_[i + 1];
        std::sort(first, last);
        if (auto dup = std::adjacent_find(first, last); dup != last)
            throw GraphError("duplicate edge " + pair_text(std::min(i, *dup), std::max(i, *dup)));
    }
    return net;
}

bool Network::has_edge(NodeId i, NodeId j) const {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<std::int32_t> Network::degrees() const {
    std::vector<std::int32_t> out(static_cast<std::size_t>(node_count()));
    for (NodeId i = 0; i < node_count(); ++i)
        out[i] = degree(i);
    return out;
}

std::vector<Edge> Network::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count()));
    for (NodeId i = 0; i < node_count(); ++i)
        for (NodeId j : neighbors(i))
            if (i < j)
                out.emplace_back(i, j);
    return out;
}

std::optional<double> assortativity(const Network& net) {
    // Sums over both orientations of every edge; the two marginals coincide.
    double sum_x = 0.0, sum_xx = 0.0, sum_xy = 0.0;
    std::int64_t count = 0;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        const double ki = net.degree(i);
        for (NodeId j : net.neighbors(i)) {
            const double kj = net.degree(j);
            sum_x += ki;
            sum_xx += ki * ki;
            sum_xy += ki * kj;
            ++count;
        }
    }
    if (count == 0)
        return std::nullopt;
    const double n = static_cast<double>(count);
    const double mean = sum_x / n;
    const double var = sum_xx / n - mean * mean;
    if (var <= 1e-12 * std::max(1.0, mean * mean))
        return std::nullopt;
    const double r = (sum_xy / n - mean * mean) / var;
    return std::clamp(r, -1.0, 1.0);
}

DegreeStats degree_stats(const Network& net) {
    DegreeStats s;
    const NodeId z = net.node_count();
    if (z == 0)
        return s;
    std::map<std::int32_t, std::int64_t> counts;
    for (NodeId i = 0; i < z; ++i)
        ++counts[net.degree(i)];
    double m1 = 0.0, m2 = 0.0;
    for (const auto& [k, c] : counts) {
        const double d = static_cast<double>(c) / z;
        s.distribution[k] = d;
        m1 += k * d;
        m2 += static_cast<double>(k) * k * d;
    }
    s.mean_degree = m1;
    s.degree_variance = std::max(0.0, m2 - m1 * m1);
    s.assortativity = assortativity(net);
    return s;
}

std::vector<NodeId> component_labels(const Network& net) {
    const NodeId z = net.node_count();
    std::vector<NodeId> label(static_cast<std::size_t>(z), -1);
    std::vector<NodeId> stack;
    for (NodeId root = 0; root < z; ++root) {
        if (label[root] >= 0)
            continue;
        label[root] = root;
        stack.push_back(root);
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : net.neighbors(u)) {
                if (label[v] < 0) {
                    label[v] = root;
                    stack.push_back(v);
                }
            }
        }
    }
    return label;
}

bool is_connected(const Network& net) {
    if (net.node_count() <= 1)
        return true;
    const auto label = component_labels(net);
    return std::all_of(label.begin(), label.end(), [](NodeId l) { return l == 0; });
}

std::vector<NodeId> largest_component(const Network& net) {
    const auto label = component_labels(net);
    std::vector<NodeId> size(label.size(), 0);
    for (NodeId l : label)
        ++size[l];
    NodeId best = 0;
    for (std::size_t l = 0; l < size.size(); ++l)
        if (size[l] > size[best])
            best = static_cast<NodeId>(l);
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] == best)
            out.push_back(static_cast<NodeId>(i));
    return out;
}

void write_edge_list(const Network& net, std::ostream& out) {
    out << "# Z=" << net.node_count() << '\n';
    for (const auto& [i, j] : net.edges())
        out << i << '\t' << j << '\n';
}

Network read_edge_list(std::istream& in) {
    std::string line;
    std::optional<NodeId> z;
    std::vector<Edge> edges;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            if (!z && line.rfind("# Z=", 0) == 0) {
                try {
                    z = static_cast<NodeId>(std::stol(line.substr(4)));
                } catch (const std::exception&) {
                    throw GraphError("line " + std::to_string(line_no) + ": malformed header");
                }
            }
            continue;
        }
        std::istringstream ls(line);
        long long i = 0, j = 0;
        if (!(ls >> i >> j))
            throw GraphError("line " + std::to_string(line_no) + ": expected 'i<TAB>j'");
        edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
    if (!z)
        throw GraphError("missing '# Z=<int>' header");
    return Network::from_edges(edges, *z);
}

void save_edge_list(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw GraphError("cannot open '" + path + "' for writing");
    write_edge_list(net, out);
    if (!out)
        throw GraphError("write failed for '" + path + "'");
}

Network load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw GraphError("cannot open '" + path + "'");
    return read_edge_list(in);
}

}  // namespace mixcascade
