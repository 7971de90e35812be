#include "adsim/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adsim::partition {

void PartitionState::validate(const Workspace& ws) const {
    if (generators.empty()) throw std::invalid_argument("partition: state needs at least one generator");
    if (weights.size() != generators.size() || rates.size() != generators.size())
        throw std::invalid_argument("partition: weights and rates must match the generator count");
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (!ws.contains(generators[i]))
            throw std::invalid_argument("partition: generators must lie in Q");
        for (std::size_t j = i + 1; j < generators.size(); ++j)
            if (generators[i] == generators[j])
                throw std::invalid_argument("partition: generators must be pairwise distinct");
    }
    double total = 0.0;
    for (double a : rates) {
        if (!(a > 0.0)) throw std::invalid_argument("partition: rates must be positive");
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("partition: rates must sum to 1");
}

namespace {

// Round onto the 2^-40 grid. Grid values below 2^13 in magnitude carry at
// most 53 significant bits, so adding and subtracting them is exact.
double grid_snap(double x) { return std::nearbyint(x * 0x1.0p40) * 0x1.0p-40; }

}  // namespace

void apply_balancing_increment(std::span<double> weights, std::span<const double> rates, double gamma,
                               std::size_t winner) {
    double gain_total = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (j == winner) continue;
        const double gain = grid_snap(gamma * rates[j]);
        weights[j] += gain;
        gain_total += gain;  // exact: all grid values
    }
    // Since the rates sum to 1, gamma*(a_i - 1) equals minus the other
    // increments; applying the exact negation keeps sum(weights) at bitwise
    // zero. Everything stays on the grid, where these adds are exact.
    weights[winner] -= gain_total;
}

std::size_t partition_update(PartitionState& state, const Workspace& ws,
                             const consensus::CommGraph& graph, const Vec& z) {
    if (!ws.contains(z)) throw std::domain_error("partition: event location outside the workspace");
    const std::size_t n = state.generators.size();
    std::vector<double> scores(n);
    for (std::size_t j = 0; j < n; ++j)
        scores[j] = state.cost.value(dist(z, state.generators[j])) - state.weights[j];
    const std::size_t win = consensus::winner(scores, graph);
    apply_balancing_increment(state.weights, state.rates, state.schedule.at(state.k), win);
    ++state.k;
    return win;
}

mc::Estimate dual_value(const PartitionState& state, const events::SpatialDistribution& law,
                        long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("partition: dual value needs samples >= 1");
    mc::MomentSum total = mc::run_chunked<mc::MomentSum>(
        samples, seed,
        [&](mc::MomentSum& part, Rng& rng, long count) {
            for (long s = 0; s < count; ++s) {
                const Vec z = law.sample(rng);
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < state.generators.size(); ++i)
                    best = std::min(best,
                                    state.cost.value(dist(z, state.generators[i])) - state.weights[i]);
                part.add(best);
            }
        },
        [](mc::MomentSum& acc, const mc::MomentSum& part) { acc.merge(part); });
    mc::Estimate est = total.estimate();
    for (std::size_t i = 0; i < state.rates.size(); ++i) est.value += state.rates[i] * state.weights[i];
    return est;
}

namespace serial {

mc::Estimate dual_value(const PartitionState& state, const events::SpatialDistribution& law,
                        long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("partition: dual value needs samples >= 1");
    mc::MomentSum total;
    Rng rng(seed);
    for (long s = 0; s < samples; ++s) {
        const Vec z = law.sample(rng);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < state.generators.size(); ++i)
            best = std::min(best, state.cost.value(dist(z, state.generators[i])) - state.weights[i]);
        total.add(best);
    }
    mc::Estimate est = total.estimate();
    for (std::size_t i = 0; i < state.rates.size(); ++i) est.value += state.rates[i] * state.weights[i];
    return est;
}

}  // namespace serial

std::vector<double> deterministic_supergradient(const PartitionState& state,
                                                const events::SpatialDistribution& law, long samples,
                                                std::uint64_t seed) {
    const std::vector<double> measures = geom::estimate_cell_measures(state.diagram(), law, samples, seed);
    std::vector<double> g(measures.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = state.rates[i] - measures[i];
    return g;
}

PartitionRun run_partition(PartitionState& state, const Workspace& ws,
                           const consensus::CommGraph& graph, const events::SpatialDistribution& law,
                           long num_events, Rng& rng, long window) {
    PartitionRun run;
    run.winners.reserve(num_events);
    for (long k = 0; k < num_events; ++k)
        run.winners.push_back(partition_update(state, ws, graph, law.sample(rng)));
    const std::size_t n = state.generators.size();
    run.cumulative_frequencies.assign(n, 0.0);
    run.trailing_frequencies.assign(n, 0.0);
    for (std::size_t w : run.winners) run.cumulative_frequencies[w] += 1.0;
    const long tail = std::min<long>(window, num_events);
    for (long k = num_events - tail; k < num_events; ++k)
        run.trailing_frequencies[run.winners[static_cast<std::size_t>(k)]] += 1.0;
    if (num_events > 0)
        for (std::size_t i = 0; i < n; ++i) {
            run.cumulative_frequencies[i] /= static_cast<double>(num_events);
            run.trailing_frequencies[i] /= static_cast<double>(tail);
        }
    run.final_weights = state.weights;
    return run;
}

std::vector<Vec> default_generators(int n, const Workspace& ws) {
    if (n < 1) throw std::invalid_argument("partition: generator count must be positive");
    const Vec& lo = ws.bounds_lo();
    const Vec& hi = ws.bounds_hi();
    std::vector<Vec> out;
    out.reserve(n);
    auto halton = [](int index, int base) {
        double f = 1.0, r = 0.0;
        for (int i = index; i > 0; i /= base) {
            f /= base;
            r += f * (i % base);
        }
        return r;
    };
    for (int i = 0; i < n; ++i) {
        Vec g = Vec::zero(ws.dim());
        for (int c = 0; c < ws.dim(); ++c) {
            const double u = c == 0 ? halton(i + 1, 2) : (c == 1 ? halton(i + 1, 3) : halton(i + 1, 5));
            // Lower corner quarter of the bounding box, then projected into Q.
            g[c] = lo[c] + 0.25 * (hi[c] - lo[c]) * u + 0.01 * (hi[c] - lo[c]);
        }
        out.push_back(ws.project(g));
    }
    return out;
}

}  // namespace adsim::partition
