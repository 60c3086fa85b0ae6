#include "wta/graph.hpp"

#include "wta/error.hpp"
#include "wta/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>

namespace wta {

namespace {

void check_members(const NodeSet& s, std::size_t n) {
    if (!s.empty() && s.members().back() >= n)
        throw Error(ErrorCode::IndexOutOfRange,
                    "node " + std::to_string(s.members().back()) + " not in graph of size " + std::to_string(n));
}

} // namespace

NodeSet::NodeSet(std::initializer_list<NodeId> ids) : NodeSet(std::vector<NodeId>(ids)) {}

NodeSet::NodeSet(std::vector<NodeId> ids) : members_(std::move(ids)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

NodeSet NodeSet::range(std::size_t n) {
    std::vector<NodeId> ids(n);
    for (std::size_t k = 0; k < n; ++k)
        ids[k] = k;
    return NodeSet(std::move(ids));
}

bool NodeSet::contains(NodeId id) const { return std::binary_search(members_.begin(), members_.end(), id); }

NodeSet NodeSet::intersect(const NodeSet& other) const {
    std::vector<NodeId> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                          std::back_inserter(out));
    return NodeSet(std::move(out));
}

Graph::Graph(std::size_t n, std::span<const Edge> edges) : n_(n), weights_(n), adjacency_(n) {
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "graph needs at least one node");
    for (const Edge& e : edges) {
        if (e.i >= n || e.j >= n)
            throw Error(ErrorCode::IndexOutOfRange, "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                                        ") outside [0, " + std::to_string(n) + ")");
        if (e.i == e.j)
            throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.i));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw Error(ErrorCode::NonpositiveWeight, "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                                                          ") has weight " + std::to_string(e.weight));
        const double existing = weights_(e.i, e.j);
        if (existing != 0.0) {
            if (existing != e.weight)
                throw Error(ErrorCode::DuplicateEdge, "edge (" + std::to_string(e.i) + ", " +
                                                          std::to_string(e.j) + ") given twice with different weights");
            continue;
        }
        weights_(e.i, e.j) = e.weight;
        weights_(e.j, e.i) = e.weight;
        ++edge_count_;
    }
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (weights_(i, j) > 0.0)
                adjacency_[i].push_back({j, weights_(i, j)});
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId i = 0; i < n_; ++i)
        for (const Neighbor& nb : adjacency_[i])
            if (nb.id > i)
                out.push_back({i, nb.id, nb.weight});
    return out;
}

Subgraph induced_subgraph(const Graph& g, const NodeSet& s) {
    check_members(s, g.size());
    std::vector<NodeId> ids(s.begin(), s.end());
    std::vector<std::size_t> local(g.size(), SIZE_MAX);
    for (std::size_t k = 0; k < ids.size(); ++k)
        local[ids[k]] = k;
    std::vector<Edge> kept;
    for (const Edge& e : g.edges())
        if (local[e.i] != SIZE_MAX && local[e.j] != SIZE_MAX)
            kept.push_back({local[e.i], local[e.j], e.weight});
    if (ids.empty())
        return {Graph(Graph::NullTag{}), {}};
    return {Graph(ids.size(), kept), std::move(ids)};
}

std::vector<NodeSet> connected_components(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<bool> seen(n, false);
    std::vector<NodeSet> out;
    std::vector<NodeId> stack;
    for (NodeId root = 0; root < n; ++root) {
        if (seen[root])
            continue;
        std::vector<NodeId> members;
        stack.push_back(root);
        seen[root] = true;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (const Neighbor& nb : g.neighbors(v)) {
                if (!seen[nb.id]) {
                    seen[nb.id] = true;
                    stack.push_back(nb.id);
                }
            }
        }
        out.emplace_back(std::move(members));
    }
    return out;
}

bool is_connected(const Graph& g) { return connected_components(g).size() == 1; }

bool is_independent_set(const Graph& g, const NodeSet& s) {
    check_members(s, g.size());
    for (NodeId v : s)
        for (const Neighbor& nb : g.neighbors(v))
            if (s.contains(nb.id))
                return false;
    return true;
}

Graph random_graph(std::size_t n, double p, WeightSpec weights, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::InvalidProbability, "edge probability " + std::to_string(p) + " outside [0, 1]");
    if (weights.mode == WeightSpec::Mode::uniform && !(weights.lo > 0.0 && weights.hi >= weights.lo))
        throw Error(ErrorCode::InvalidArgument, "uniform weights need 0 < lo <= hi");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (!rng.bernoulli(p))
                continue;
            const double w = weights.mode == WeightSpec::Mode::unit ? 1.0 : rng.uniform(weights.lo, weights.hi);
            edges.push_back({i, j, w});
        }
    }
    return Graph(n, edges);
}

Graph random_connected_graph(std::size_t n, double p, WeightSpec weights, std::uint64_t seed, int max_attempts) {
    Rng seeds(seed);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Graph g = random_graph(n, p, weights, seeds.next());
        if (is_connected(g))
            return g;
    }
    throw Error(ErrorCode::InvalidArgument, "no connected sample after " + std::to_string(max_attempts) + " attempts");
}

std::uint64_t graph_hash(const Graph& g) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(g.size());
    for (const Edge& e : g.edges()) {
        mix(e.i);
        mix(e.j);
        mix(std::bit_cast<std::uint64_t>(e.weight));
    }
    return h;
}

} // namespace wta
