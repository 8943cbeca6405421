#pragma once

#include <algorithm>
#include <vector>

#include "mixcascade/graph.hpp"

namespace mixcascade::detail {

// Edit-friendly simple graph used while generating or rewiring.
class MutableGraph {
public:
    explicit MutableGraph(NodeId n) : adj_(static_cast<std::size_t>(n)), stamp_(static_cast<std::size_t>(n), 0) {}

    explicit MutableGraph(const Network& net) : MutableGraph(net.node_count()) {
        for (NodeId i = 0; i < net.node_count(); ++i) {
            auto nb = net.neighbors(i);
            adj_[i].assign(nb.begin(), nb.end());
        }
        edges_ = net.edges();
    }

    NodeId node_count() const { return static_cast<NodeId>(adj_.size()); }
    std::int32_t degree(NodeId i) const { return static_cast<std::int32_t>(adj_[i].size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(NodeId i, NodeId j) const {
        const auto& a = adj_[i];
        return std::binary_search(a.begin(), a.end(), j);
    }

    void add_edge(NodeId i, NodeId j) {
        link(i, j);
        link(j, i);
        edges_.emplace_back(std::min(i, j), std::max(i, j));
    }

    // Replaces the edge stored at `slot` with (i, j).
    void replace_edge(std::size_t slot, NodeId i, NodeId j) {
        const auto [a, b] = edges_[slot];
        unlink(a, b);
        unlink(b, a);
        link(i, j);
        link(j, i);
        edges_[slot] = {std::min(i, j), std::max(i, j)};
    }

    void remove_edge_at(std::size_t slot) {
        const auto [a, b] = edges_[slot];
        unlink(a, b);
        unlink(b, a);
        edges_[slot] = edges_.back();
        edges_.pop_back();
    }

    // True when every node in `targets` is reachable from `from`.
    template <typename Range>
    bool reaches_all(NodeId from, const Range& targets) {
        ++epoch_;
        std::size_t remaining = 0;
        for (NodeId t : targets) {
            if (stamp_[t] != epoch_ + 1) {
                stamp_[t] = epoch_ + 1;
                ++remaining;
            }
        }
        // stamp == epoch_ + 1 marks an unvisited target, epoch_ + 2 visited.
        const unsigned visited = epoch_ + 2;
        queue_.clear();
        auto visit = [&](NodeId v) {
            if (stamp_[v] == epoch_ + 1)
                --remaining;
            stamp_[v] = visited;
            queue_.push_back(v);
        };
        visit(from);
        for (std::size_t head = 0; head < queue_.size() && remaining > 0; ++head)
            for (NodeId v : adj_[queue_[head]])
                if (stamp_[v] != visited)
                    visit(v);
        epoch_ += 2;
        return remaining == 0;
    }

    Network freeze() const { return Network::from_edges(edges_, node_count()); }

private:
    void link(NodeId i, NodeId j) {
        auto& a = adj_[i];
        a.insert(std::lower_bound(a.begin(), a.end(), j), j);
    }
    void unlink(NodeId i, NodeId j) {
        auto& a = adj_[i];
        a.erase(std::lower_bound(a.begin(), a.end(), j));
    }

    std::vector<std::vector<NodeId>> adj_;
    std::vector<Edge> edges_;
    std::vector<unsigned> stamp_;
    std::vector<NodeId> queue_;
    unsigned epoch_ = 0;
};

}  // namespace mixcascade::detail
