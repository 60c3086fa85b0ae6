#pragma once

#include "wta/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace wta {

using NodeId = std::size_t;

struct Edge {
    NodeId i;
    NodeId j;
    double weight;

    bool operator==(const Edge&) const = default;
};

struct Neighbor {
    NodeId id;
    double weight;
};

/// Sorted, duplicate-free set of agent ids.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<NodeId> ids);
    explicit NodeSet(std::vector<NodeId> ids);

    static NodeSet range(std::size_t n);

    std::span<const NodeId> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(NodeId id) const;

    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    NodeId operator[](std::size_t k) const { return members_[k]; }

    NodeSet intersect(const NodeSet& other) const;

    bool operator==(const NodeSet&) const = default;

private:
    std::vector<NodeId> members_;
};

struct Subgraph;

/// Weighted undirected simple graph.
///
/// Holds the symmetric weight matrix and per-node adjacency lists side by
/// side; both are fixed at construction.  Node ids are dense in [0, n).
class Graph {
public:
    /// Throws SelfLoop, NonpositiveWeight, DuplicateEdge or IndexOutOfRange.
    /// Repeating an edge with an identical weight is accepted.
    Graph(std::size_t n, std::span<const Edge> edges);
    Graph(std::size_t n, std::initializer_list<Edge> edges)
        : Graph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edge_count_; }

    double weight(NodeId i, NodeId j) const { return weights_(i, j); }
    const SquareMatrix& weights() const noexcept { return weights_; }
    std::span<const Neighbor> neighbors(NodeId i) const { return adjacency_[i]; }

    /// Edges with i < j, ordered by (i, j).
    std::vector<Edge> edges() const;

    bool operator==(const Graph& other) const { return n_ == other.n_ && weights_ == other.weights_; }

private:
    struct NullTag {};
    explicit Graph(NullTag) : n_(0) {}
    friend Subgraph induced_subgraph(const Graph& g, const NodeSet& s);

    std::size_t n_;
    std::size_t edge_count_ = 0;
    SquareMatrix weights_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

struct Subgraph {
    Graph graph;
    /// original_ids[k] is the id in the parent graph of node k.
    std::vector<NodeId> original_ids;
};

/// The restriction g ∧ s: nodes of s relabelled 0..|s|-1 in ascending order,
/// keeping only edges with both endpoints in s.
Subgraph induced_subgraph(const Graph& g, const NodeSet& s);

/// Components sorted by smallest member.
std::vector<NodeSet> connected_components(const Graph& g);
bool is_connected(const Graph& g);

bool is_independent_set(const Graph& g, const NodeSet& s);

struct WeightSpec {
    enum class Mode { unit, uniform } mode = Mode::unit;
    double lo = 1.0;
    double hi = 1.0;

    static WeightSpec unit() { return {}; }
    static WeightSpec uniform(double lo, double hi) { return {Mode::uniform, lo, hi}; }
};

/// G(n, p) with independent pair inclusion.  Pairs are visited in (i, j)
/// order, i < j; each visited pair consumes one draw, plus one more for its
/// weight when included under uniform weights.
Graph random_graph(std::size_t n, double p, WeightSpec weights, std::uint64_t seed);

/// Draws from one seeded stream until a connected sample appears.
Graph random_connected_graph(std::size_t n, double p, WeightSpec weights, std::uint64_t seed,
                             int max_attempts = 10000);

/// FNV-1a over n and the edge list; stable across runs and platforms.
std::uint64_t graph_hash(const Graph& g);

} // namespace wta
