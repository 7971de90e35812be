#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adsim/consensus.hpp"
#include "adsim/coverage.hpp"
#include "adsim/events.hpp"
#include "adsim/geometry.hpp"
#include "adsim/mc.hpp"

namespace adsim::partition {

// Dual ascent on generalized-Voronoi weights: fixed distinct generators, one
// weight per agent, target utilization rates a_i > 0 summing to 1. Weights
// start at zero and their sum stays bitwise zero forever (see
// apply_balancing_increment).
struct PartitionState {
    std::vector<Vec> generators;
    std::vector<double> weights;
    std::vector<double> rates;
    CostSpec cost;
    coverage::StepsizeSchedule schedule;
    long k = 0;

    void validate(const Workspace& ws) const;
    geom::GeneralizedDiagram diagram() const { return {generators, weights, cost}; }
};

// Winner gets gamma*(a_i - 1), everyone else gamma*a_j. Increments are
// snapped to the 2^-40 grid with the winner's entry defined as the exact
// negation of the others' total, so the weight sum is conserved bitwise, not
// just to rounding error. The snap perturbs each increment by < 1e-12.
void apply_balancing_increment(std::span<double> weights, std::span<const double> rates, double gamma,
                               std::size_t winner);

// One event of the adaptive partitioning update; returns the winning agent.
std::size_t partition_update(PartitionState& state, const Workspace& ws,
                             const consensus::CommGraph& graph, const Vec& z);

// Monte Carlo estimate of the concave dual h(w) = E[min_i f(||Z-g_i||)-w_i]
// + sum_i a_i w_i. The standard error covers the integral term only; the
// rate term is deterministic.
mc::Estimate dual_value(const PartitionState& state, const events::SpatialDistribution& law,
                        long samples, std::uint64_t seed);

namespace serial {
mc::Estimate dual_value(const PartitionState& state, const events::SpatialDistribution& law,
                        long samples, std::uint64_t seed);
}

// Supergradient of h at the current weights: a_i minus the estimated cell
// measure.
std::vector<double> deterministic_supergradient(const PartitionState& state,
                                                const events::SpatialDistribution& law, long samples,
                                                std::uint64_t seed);

struct PartitionRun {
    std::vector<std::size_t> winners;
    std::vector<double> trailing_frequencies;    // over the final window
    std::vector<double> cumulative_frequencies;  // since the start
    std::vector<double> final_weights;
};

PartitionRun run_partition(PartitionState& state, const Workspace& ws,
                           const consensus::CommGraph& graph, const events::SpatialDistribution& law,
                           long num_events, Rng& rng, long window);

// Low-discrepancy generator placement in the lower-left corner quarter of the
// bounding box; any explicit distinct set is equally valid.
std::vector<Vec> default_generators(int n, const Workspace& ws);

}  // namespace adsim::partition
