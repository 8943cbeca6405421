#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mixcascade {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Immutable simple undirected graph. Node ids are dense 0..Z-1; generators
// assign ids in creation order so id order equals age order.
class Network {
public:
    Network() = default;

    // Validates and builds. Throws GraphError naming the offending pair on
    // out-of-range ids, self-loops and duplicate edges.
    static Network from_edges(std::span<const Edge> edges, NodeId node_count);

    NodeId node_count() const { return static_cast<NodeId>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(targets_.size() / 2); }

    // Sorted neighbor list.
    std::span<const NodeId> neighbors(NodeId i) const {
        return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
    }
    std::int32_t degree(NodeId i) const { return static_cast<std::int32_t>(offsets_[i + 1] - offsets_[i]); }
    bool has_edge(NodeId i, NodeId j) const;

    std::vector<std::int32_t> degrees() const;

    // Every edge once, as (i, j) with i < j, in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::vector<std::int64_t> offsets_;
    std::vector<NodeId> targets_;
};

struct DegreeStats {
    std::map<std::int32_t, double> distribution;  // D(k)
    double mean_degree = 0.0;
    double degree_variance = 0.0;
    // Newman degree-degree Pearson coefficient; nullopt when undefined
    // (no edges, or every edge endpoint has the same degree).
    std::optional<double> assortativity;

    friend bool operator==(const DegreeStats&, const DegreeStats&) = default;
};

DegreeStats degree_stats(const Network& net);

// Pearson degree correlation only; see DegreeStats::assortativity.
std::optional<double> assortativity(const Network& net);

bool is_connected(const Network& net);

// Largest connected component as a sorted node list. Ties go to the
// component holding the smallest node index.
std::vector<NodeId> largest_component(const Network& net);

// Component label per node, labels numbered by smallest member.
std::vector<NodeId> component_labels(const Network& net);

// Edge-list text format: "# Z=<int>" header, then one "i<TAB>j" per line.
void write_edge_list(const Network& net, std::ostream& out);
Network read_edge_list(std::istream& in);
void save_edge_list(const Network& net, const std::string& path);
Network load_edge_list(const std::string& path);

}  // namespace mixcascade
