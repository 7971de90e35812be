#pragma once

#include <span>
#include <utility>
#include <vector>

#include "adsim/vec.hpp"

namespace adsim::consensus {

// Undirected connected communication graph with a known diameter bound.
class CommGraph {
  public:
    static CommGraph complete(int n);
    // diam_bound = -1 means "use the true diameter" (computed here; the
    // constructor rejects bounds below it and disconnected graphs).
    static CommGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                                int diam_bound = -1);
    // Connect agents within `radius` of each other; rejects the result if it
    // is disconnected rather than trying to repair connectivity.
    static CommGraph r_disk(std::span<const Vec> positions, double radius);

    int size() const { return n_; }
    int diameter_bound() const { return diam_; }
    bool is_complete() const { return complete_; }
    long directed_edge_count() const { return directed_edges_; }
    const std::vector<std::vector<int>>& neighbors() const { return adj_; }

  private:
    CommGraph() = default;

    int n_ = 0;
    int diam_ = 0;
    bool complete_ = false;
    long directed_edges_ = 0;
    std::vector<std::vector<int>> adj_;
};

struct FloodMinResult {
    std::vector<bool> flags;  // flags[i]: agent i still holds its initial value, i.e. i is a minimizer
    long rounds = 0;
    long messages = 0;
    // Recorded only on request: values_per_round[r][i] after round r (round 0 = initial).
    std::vector<std::vector<double>> values_per_round;
};

// Synchronous FloodMin over exactly diameter_bound rounds. Values may be
// +infinity (agent did not observe the event); an all-infinite input means no
// agent saw anything and is an error.
FloodMinResult floodmin(std::span<const double> values, const CommGraph& graph,
                        bool record_trace = false);

// Smallest flagged index. On a complete graph this skips the message
// simulation; the result is identical by construction (one round of exchange
// leaves exactly the argmin set flagged).
std::size_t winner(std::span<const double> values, const CommGraph& graph);

}  // namespace adsim::consensus
