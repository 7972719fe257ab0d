/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Directed weighted recommendation graph. An edge A -> B means B appeared
 * in the list of suggestions observed while A was playing; the edge weight
 * models the probability of clicking the rank-j item of an n-item list via
 * a geometric series
 *
 *     w(j) = (1 - r) / (1 - r^n) * r^j,   r in (0, 1), default 0.9,
 *
 * so each node's outgoing weights sum to one and bottom-of-list items keep
 * non-negligible mass (r^7 ~ 0.48 of the top weight for n = 8).
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "recaudit/domain.hpp"
#include "recaudit/errors.hpp"

namespace recaudit {

class RecGraph {
  public:
    using NodeIx = std::uint32_t;

    struct Edge {
        NodeIx src = 0;
        NodeIx dst = 0;
        std::uint32_t rank = 0;
        double weight = 0.0;

        friend bool operator==(const Edge&, const Edge&) = default;
    };

    RecGraph() = default;

    /// Assembles a graph from interned parts. Edges may arrive in any order;
    /// they are stored grouped by source, rank-ascending. Validates: indexes
    /// in range, no self-loops, at most one edge per (src,dst), contiguous
    /// ranks per source.
    static RecGraph from_parts(std::vector<VideoId> ids, std::vector<Edge> edges,
                               bool weights_assigned) {
        RecGraph g;
        g.ids_ = std::move(ids);
        for (NodeIx i = 0; i < g.ids_.size(); ++i) {
            if (g.ids_[i].empty()) throw IntegrityError("empty video id in graph");
            if (!g.index_.emplace(g.ids_[i], i).second)
                throw IntegrityError("duplicate video id in graph: " + g.ids_[i]);
        }
        g.edges_ = std::move(edges);
        g.weights_assigned_ = weights_assigned;
        g.finalize();
        return g;
    }

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool weights_assigned() const { return weights_assigned_; }

    const std::vector<VideoId>& ids() const { return ids_; }
    const VideoId& id(NodeIx u) const { return ids_[u]; }

    std::optional<NodeIx> index_of(const VideoId& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<Edge>& edges() const { return edges_; }

    /// Outgoing edges of u, rank-ascending.
    std::span<const Edge> out_edges(NodeIx u) const {
        return {edges_.data() + out_off_[u], edges_.data() + out_off_[u + 1]};
    }

    std::size_t out_degree(NodeIx u) const { return out_off_[u + 1] - out_off_[u]; }
    std::size_t in_degree(NodeIx u) const { return in_off_[u + 1] - in_off_[u]; }

    /// Indexes into edges() of the edges pointing at v.
    std::span<const std::uint32_t> in_edge_indexes(NodeIx v) const {
        return {in_ix_.data() + in_off_[v], in_ix_.data() + in_off_[v + 1]};
    }

    friend bool operator==(const RecGraph& a, const RecGraph& b) {
        return a.ids_ == b.ids_ && a.edges_ == b.edges_ &&
               a.weights_assigned_ == b.weights_assigned_;
    }

  private:
    friend RecGraph build_graph(const SessionLog&);
    friend RecGraph assign_weights(RecGraph, double);

    NodeIx intern(const VideoId& id) {
        auto [it, inserted] = index_.emplace(id, static_cast<NodeIx>(ids_.size()));
        if (inserted) ids_.push_back(id);
        return it->second;
    }

    /// Sorts edges by (src, rank), rebuilds adjacency offsets, and checks
    /// structural invariants.
    void finalize() {
        const std::size_t n = ids_.size();
        std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return a.src != b.src ? a.src < b.src : a.rank < b.rank;
        });
        out_off_.assign(n + 1, 0);
        for (const Edge& e : edges_) {
            if (e.src >= n || e.dst >= n) throw IntegrityError("edge endpoint out of range");
            if (e.src == e.dst) throw IntegrityError("self-loop on " + ids_[e.src]);
            ++out_off_[e.src + 1];
        }
        for (std::size_t i = 0; i < n; ++i) out_off_[i + 1] += out_off_[i];
        for (std::size_t u = 0; u < n; ++u) {
            auto es = out_edges(static_cast<NodeIx>(u));
            std::unordered_set<NodeIx> dsts;
            for (std::size_t j = 0; j < es.size(); ++j) {
                if (es[j].rank != j)
                    throw IntegrityError("non-contiguous ranks under " + ids_[u]);
                if (!dsts.insert(es[j].dst).second)
                    throw IntegrityError("duplicate edge " + ids_[u] + " -> " +
                                         ids_[es[j].dst]);
            }
        }
        in_off_.assign(n + 1, 0);
        in_ix_.assign(edges_.size(), 0);
        for (const Edge& e : edges_) ++in_off_[e.dst + 1];
        for (std::size_t i = 0; i < n; ++i) in_off_[i + 1] += in_off_[i];
        std::vector<std::uint32_t> cursor(in_off_.begin(), in_off_.end() - 1);
        for (std::uint32_t ei = 0; ei < edges_.size(); ++ei)
            in_ix_[cursor[edges_[ei].dst]++] = ei;
    }

    std::vector<VideoId> ids_;
    std::unordered_map<VideoId, NodeIx> index_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> out_off_;
    std::vector<std::uint32_t> in_off_;
    std::vector<std::uint32_t> in_ix_;
    bool weights_assigned_ = false;
};

/// Builds the unweighted graph from a cleaned log: one node per distinct
/// video seen anywhere, one edge per (watched, recommended) pair carrying
/// the observed rank. Self-loops are dropped; a duplicate recommendation in
/// a malformed log keeps its best (lowest) rank, and ranks are re-compacted.
/// Node and edge order follow first appearance, so the result is
/// deterministic for a given log.
inline RecGraph build_graph(const SessionLog& log) {
    RecGraph g;
    std::vector<RecGraph::Edge> edges;
    std::unordered_set<std::string_view> watched_seen;
    for (const RecEvent& e : log.events) {
        if (!watched_seen.insert(e.watched).second)
            throw IntegrityError("video watched twice in log: " + e.watched);
        const RecGraph::NodeIx src = g.intern(e.watched);
        std::uint32_t rank = 0;
        std::unordered_set<RecGraph::NodeIx> dsts;
        for (const VideoId& r : e.recommendations) {
            const RecGraph::NodeIx dst = g.intern(r);
            if (dst == src) continue;              // platform never suggests the playing video
            if (!dsts.insert(dst).second) continue; // keep best rank only
            edges.push_back({src, dst, rank++, 0.0});
        }
    }
    g.edges_ = std::move(edges);
    g.finalize();
    return g;
}

/// Assigns the geometric-series weights. The closed form already sums to
/// one per source, so no renormalization is applied. Weights are built by
/// repeated multiplication so consecutive weights differ by exactly r.
inline RecGraph assign_weights(RecGraph g, double r = 0.9) {
    if (!(r > 0.0 && r < 1.0))
        throw ParameterError("weight ratio r must lie in (0,1), got " + std::to_string(r));
    for (std::size_t u = 0; u < g.node_count(); ++u) {
        const std::size_t n = g.out_degree(static_cast<RecGraph::NodeIx>(u));
        if (n == 0) continue;
        double w = (1.0 - r) / (1.0 - std::pow(r, static_cast<double>(n)));
        const std::size_t begin = g.out_off_[u];
        for (std::size_t j = 0; j < n; ++j) {
            g.edges_[begin + j].weight = w;
            w *= r;
        }
    }
    g.weights_assigned_ = true;
    return g;
}

struct GraphStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double avg_degree = 0.0;      // |E| / |V|
    double avg_path_length = 0.0; // mean finite shortest-path length, largest WCC
    std::size_t diameter = 0;     // max finite shortest-path length
};

/// Whether shortest paths for the path-length statistics follow edge
/// direction. Which convention published network statistics use is usually
/// tool-dependent, so both are available.
enum class PathMode { Directed, Undirected };

/// Descriptive statistics over hop-count shortest paths on the largest
/// weakly connected component; unreachable pairs are ignored.
inline GraphStats graph_stats(const RecGraph& g, PathMode mode = PathMode::Directed) {
    const std::size_t n = g.node_count();
    if (n == 0) throw ParameterError("graph_stats: empty graph");

    GraphStats st;
    st.node_count = n;
    st.edge_count = g.edge_count();
    st.avg_degree = static_cast<double>(st.edge_count) / static_cast<double>(n);

    // Largest weakly connected component via union-find.
    std::vector<std::uint32_t> parent(n);
    for (std::uint32_t i = 0; i < n; ++i) parent[i] = i;
    std::vector<std::uint32_t> size(n, 1);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : g.edges()) {
        std::uint32_t a = find(e.src), b = find(e.dst);
        if (a == b) continue;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
    std::uint32_t root = 0;
    for (std::uint32_t i = 0; i < n; ++i)
        if (size[find(i)] > size[find(root)]) root = find(i);
    root = find(root);

    std::vector<std::uint32_t> comp;
    std::vector<bool> in_comp(n, false);
    for (std::uint32_t i = 0; i < n; ++i)
        if (find(i) == root) {
            comp.push_back(i);
            in_comp[i] = true;
        }

    // Undirected adjacency is only materialized when asked for.
    std::vector<std::vector<std::uint32_t>> undirected;
    if (mode == PathMode::Undirected) {
        undirected.resize(n);
        for (const auto& e : g.edges()) {
            undirected[e.src].push_back(e.dst);
            undirected[e.dst].push_back(e.src);
        }
    }

    std::vector<std::int32_t> dist(n);
    std::deque<std::uint32_t> queue;
    long double total = 0.0L;
    std::uint64_t finite_pairs = 0;
    std::size_t diameter = 0;
    for (std::uint32_t s : comp) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while (!queue.empty()) {
            const std::uint32_t u = queue.front();
            queue.pop_front();
            const std::int32_t du = dist[u];
            auto visit = [&](std::uint32_t v) {
                if (in_comp[v] && dist[v] < 0) {
                    dist[v] = du + 1;
                    queue.push_back(v);
                }
            };
            if (mode == PathMode::Directed) {
                for (const auto& e : g.out_edges(u)) visit(e.dst);
            } else {
                for (std::uint32_t v : undirected[u]) visit(v);
            }
        }
        for (std::uint32_t v : comp) {
            if (v == s || dist[v] < 0) continue;
            total += dist[v];
            ++finite_pairs;
            diameter = std::max(diameter, static_cast<std::size_t>(dist[v]));
        }
    }
    st.avg_path_length = finite_pairs ? static_cast<double>(total / finite_pairs) : 0.0;
    st.diameter = diameter;
    return st;
}

} // namespace recaudit
