#include "adsim/consensus.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace adsim::consensus {

namespace {

// BFS eccentricities; returns -1 if the graph is disconnected.
int true_diameter(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    int diameter = 0;
    std::vector<int> depth(n);
    for (int src = 0; src < n; ++src) {
        std::fill(depth.begin(), depth.end(), -1);
        std::queue<int> frontier;
        depth[src] = 0;
        frontier.push(src);
        int reached = 0;
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            ++reached;
            diameter = std::max(diameter, depth[u]);
            for (int v : adj[u]) {
                if (depth[v] < 0) {
                    depth[v] = depth[u] + 1;
                    frontier.push(v);
                }
            }
        }
        if (reached != n) return -1;
    }
    return diameter;
}

}  // namespace

CommGraph CommGraph::complete(int n) {
    if (n < 1) throw std::invalid_argument("consensus: graph needs at least one agent");
    CommGraph g;
    g.n_ = n;
    g.diam_ = n == 1 ? 0 : 1;
    g.complete_ = true;
    g.adj_.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) g.adj_[i].push_back(j);
    g.directed_edges_ = static_cast<long>(n) * (n - 1);
    return g;
}

CommGraph CommGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges, int diam_bound) {
    if (n < 1) throw std::invalid_argument("consensus: graph needs at least one agent");
    CommGraph g;
    g.n_ = n;
    g.adj_.assign(n, {});
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b)
            throw std::invalid_argument("consensus: edge endpoints out of range");
        g.adj_[a].push_back(b);
        g.adj_[b].push_back(a);
    }
    for (auto& nbrs : g.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        g.directed_edges_ += static_cast<long>(nbrs.size());
    }
    const int diameter = true_diameter(g.adj_);
    if (diameter < 0) throw std::invalid_argument("consensus: communication graph is disconnected");
    if (diam_bound < 0)
        g.diam_ = diameter;
    else if (diam_bound < diameter)
        throw std::invalid_argument("consensus: diameter bound below the true graph diameter");
    else
        g.diam_ = diam_bound;
    long undirected = g.directed_edges_ / 2;
    g.complete_ = undirected == static_cast<long>(n) * (n - 1) / 2;
    if (n == 1) g.diam_ = 0;
    return g;
}

CommGraph CommGraph::r_disk(std::span<const Vec> positions, double radius) {
    if (positions.empty()) throw std::invalid_argument("consensus: r-disk graph needs agents");
    if (!(radius > 0.0)) throw std::invalid_argument("consensus: r-disk radius must be positive");
    const int n = static_cast<int>(positions.size());
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (dist(positions[i], positions[j]) <= radius) edges.emplace_back(i, j);
    try {
        return from_edges(n, edges);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument(
            "consensus: r-disk graph is disconnected at this radius; increase the radius or use a "
            "complete graph");
    }
}

FloodMinResult floodmin(std::span<const double> values, const CommGraph& graph, bool record_trace) {
    const int n = graph.size();
    if (static_cast<int>(values.size()) != n)
        throw std::invalid_argument("consensus: value count must match agent count");
    bool any_finite = false;
    for (double v : values) any_finite = any_finite || std::isfinite(v);
    if (!any_finite) throw std::domain_error("consensus: no agent observed the event (all values infinite)");

    FloodMinResult result;
    std::vector<double> current(values.begin(), values.end());
    std::vector<double> next(current);
    if (record_trace) result.values_per_round.push_back(current);
    for (int round = 0; round < graph.diameter_bound(); ++round) {
        for (int i = 0; i < n; ++i) {
            double m = current[i];
            for (int j : graph.neighbors()[i]) m = std::min(m, current[j]);
            next[i] = m;
        }
        current.swap(next);
        result.messages += graph.directed_edge_count();
        ++result.rounds;
        if (record_trace) result.values_per_round.push_back(current);
    }
    result.flags.resize(n);
    for (int i = 0; i < n; ++i) result.flags[i] = current[i] == values[i];
    return result;
}

std::size_t winner(std::span<const double> values, const CommGraph& graph) {
    if (graph.is_complete()) {
        bool any_finite = false;
        for (double v : values) any_finite = any_finite || std::isfinite(v);
        if (!any_finite)
            throw std::domain_error("consensus: no agent observed the event (all values infinite)");
        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] < values[best]) best = i;
        return best;
    }
    const FloodMinResult result = floodmin(values, graph);
    for (std::size_t i = 0; i < result.flags.size(); ++i)
        if (result.flags[i]) return i;
    throw std::logic_error("consensus: floodmin returned no flagged agent");
}

}  // namespace adsim::consensus
