#include "adsim/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adsim/geometry.hpp"

namespace adsim::coverage {

StepsizeSchedule StepsizeSchedule::harmonic(double c, double d) {
    if (!(c > 0.0) || !(d >= 0.0))
        throw std::invalid_argument("stepsize: harmonic schedule needs c > 0 and d >= 0");
    return {Kind::Harmonic, c, d};
}

StepsizeSchedule StepsizeSchedule::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("stepsize: constant schedule needs c > 0");
    return {Kind::Constant, c, 0.0};
}

void CoverageState::validate(const Workspace& ws) const {
    if (positions.empty()) throw std::invalid_argument("coverage: state needs at least one robot");
    if (budgets.size() != positions.size())
        throw std::invalid_argument("coverage: budget count must match robot count");
    for (double b : budgets)
        if (!(b > 0.0)) throw std::invalid_argument("coverage: velocity budgets must be positive");
    for (const Vec& p : positions)
        if (!ws.contains(p)) throw std::invalid_argument("coverage: initial positions must lie in Q");
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (positions[i] == positions[j])
                throw std::invalid_argument("coverage: robot positions must be pairwise distinct");
}

Vec gradient_step(const Vec& p, const Vec& z, const CostSpec& cost) {
    const Vec diff = z - p;
    const double d = diff.norm();
    if (d == 0.0) return Vec::zero(p.dim);  // 0/||0|| := 0
    return diff * (cost.deriv(d) / d);
}

namespace {

// Moves robot `i` by the saturated, projected step and repairs the
// probability-zero case where the iterate lands exactly on another robot.
// The perturbation is 2^-40 * (1,...,1), with the opposite sign as a fallback
// when projection maps the first attempt back onto the collision.
bool move_robot(CoverageState& state, const Workspace& ws, std::size_t i, const Vec& z, double gamma) {
    const Vec raw = gradient_step(state.positions[i], z, state.cost) * gamma;
    const Vec step = geom::saturate(raw, state.budgets[i]);
    const bool saturated = step.norm() < raw.norm();
    Vec candidate = ws.project(state.positions[i] + step);
    auto collides = [&](const Vec& p) {
        for (std::size_t j = 0; j < state.positions.size(); ++j)
            if (j != i && state.positions[j] == p) return true;
        return false;
    };
    if (collides(candidate)) {
        candidate = ws.project(candidate + 0x1.0p-40 * Vec::ones(candidate.dim));
        if (collides(candidate)) {
            candidate = ws.project(candidate - 0x1.0p-39 * Vec::ones(candidate.dim));
            if (collides(candidate))
                throw std::logic_error("coverage: could not separate coincident iterates");
        }
    }
    state.positions[i] = candidate;
    return saturated;
}

}  // namespace

std::vector<double> observed_distances(const CoverageState& state, const Vec& z) {
    std::vector<double> observed(state.positions.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = dist(state.positions[i], z);
        observed[i] = d <= state.detection_radius ? d : std::numeric_limits<double>::infinity();
    }
    return observed;
}

UpdateInfo adaptive_update(CoverageState& state, const Workspace& ws, const consensus::CommGraph& graph,
                           const Vec& z) {
    if (!ws.contains(z)) throw std::domain_error("coverage: event location outside the workspace");
    const std::size_t n = state.positions.size();
    const std::vector<double> observed = observed_distances(state, z);
    UpdateInfo info;
    info.winner = consensus::winner(observed, graph);
    if (state.k < state.transient_events) {
        info.transient = true;
        info.stepsize = state.schedule.at(state.k) / (1.0 + static_cast<double>(state.k));
        for (std::size_t i = 0; i < n; ++i)
            info.saturated = move_robot(state, ws, i, z, info.stepsize) || info.saturated;
    } else {
        info.stepsize = state.schedule.at(state.k);
        info.saturated = move_robot(state, ws, info.winner, z, info.stepsize);
    }
    ++state.k;
    return info;
}

namespace {

struct GradientPartial {
    std::vector<double> sum;     // n*q component sums
    std::vector<double> sum_sq;
    long count = 0;

    void init(std::size_t components) {
        sum.assign(components, 0.0);
        sum_sq.assign(components, 0.0);
    }
};

// The per-sample integrand of the objective gradient: nonzero only for the
// owning robot, where it equals f'(||p_i-z||)(p_i-z)/||p_i-z||.
void accumulate_gradient_sample(GradientPartial& part, std::span<const Vec> positions,
                                const CostSpec& cost, const Vec& z) {
    const std::size_t i = geom::nearest_index(z, positions);
    const Vec g = -1.0 * gradient_step(positions[i], z, cost);
    const int q = positions[0].dim;
    for (int c = 0; c < q; ++c) {
        const std::size_t idx = i * static_cast<std::size_t>(q) + c;
        part.sum[idx] += g[c];
        part.sum_sq[idx] += g[c] * g[c];
    }
    ++part.count;
}

GradientEstimate finish_gradient(const GradientPartial& total, std::size_t n, int q) {
    GradientEstimate est;
    est.mean.assign(n, Vec::zero(q));
    est.se.assign(n, Vec::zero(q));
    const double m = static_cast<double>(total.count);
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < q; ++c) {
            const std::size_t idx = i * static_cast<std::size_t>(q) + c;
            const double mean = total.sum[idx] / m;
            double var = total.sum_sq[idx] / m - mean * mean;
            if (var < 0.0) var = 0.0;
            est.mean[i][c] = mean;
            est.se[i][c] = std::sqrt(var / m);
        }
    }
    return est;
}

void check_gradient_inputs(std::span<const Vec> positions, long samples) {
    if (positions.empty()) throw std::invalid_argument("coverage: gradient needs at least one robot");
    if (samples < 1) throw std::invalid_argument("coverage: gradient needs samples >= 1");
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (positions[i] == positions[j])
                throw std::domain_error(
                    "coverage: objective is not differentiable at coincident robot positions");
}

}  // namespace

GradientEstimate deterministic_gradient(std::span<const Vec> positions,
                                        const events::SpatialDistribution& law, const CostSpec& cost,
                                        long samples, std::uint64_t seed) {
    check_gradient_inputs(positions, samples);
    const std::size_t n = positions.size();
    const int q = positions[0].dim;
    const std::size_t components = n * static_cast<std::size_t>(q);
    GradientPartial total = mc::run_chunked<GradientPartial>(
        samples, seed,
        [&](GradientPartial& part, Rng& rng, long count) {
            part.init(components);
            for (long s = 0; s < count; ++s)
                accumulate_gradient_sample(part, positions, cost, law.sample(rng));
        },
        [&](GradientPartial& acc, const GradientPartial& part) {
            if (acc.sum.empty()) acc.init(components);
            for (std::size_t i = 0; i < components; ++i) {
                acc.sum[i] += part.sum[i];
                acc.sum_sq[i] += part.sum_sq[i];
            }
            acc.count += part.count;
        });
    return finish_gradient(total, n, q);
}

mc::Estimate objective_estimate(std::span<const Vec> positions, const events::SpatialDistribution& law,
                                const CostSpec& cost, long samples, std::uint64_t seed) {
    if (positions.empty()) throw std::invalid_argument("coverage: objective needs at least one robot");
    if (samples < 1) throw std::invalid_argument("coverage: objective needs samples >= 1");
    mc::MomentSum total = mc::run_chunked<mc::MomentSum>(
        samples, seed,
        [&](mc::MomentSum& part, Rng& rng, long count) {
            for (long s = 0; s < count; ++s) {
                const Vec z = law.sample(rng);
                part.add(cost.value(dist(z, positions[geom::nearest_index(z, positions)])));
            }
        },
        [](mc::MomentSum& acc, const mc::MomentSum& part) { acc.merge(part); });
    return total.estimate();
}

namespace serial {

GradientEstimate deterministic_gradient(std::span<const Vec> positions,
                                        const events::SpatialDistribution& law, const CostSpec& cost,
                                        long samples, std::uint64_t seed) {
    check_gradient_inputs(positions, samples);
    const std::size_t n = positions.size();
    const int q = positions[0].dim;
    GradientPartial total;
    total.init(n * static_cast<std::size_t>(q));
    Rng rng(seed);
    for (long s = 0; s < samples; ++s)
        accumulate_gradient_sample(total, positions, cost, law.sample(rng));
    return finish_gradient(total, n, q);
}

mc::Estimate objective_estimate(std::span<const Vec> positions, const events::SpatialDistribution& law,
                                const CostSpec& cost, long samples, std::uint64_t seed) {
    if (positions.empty()) throw std::invalid_argument("coverage: objective needs at least one robot");
    if (samples < 1) throw std::invalid_argument("coverage: objective needs samples >= 1");
    mc::MomentSum total;
    Rng rng(seed);
    for (long s = 0; s < samples; ++s) {
        const Vec z = law.sample(rng);
        total.add(cost.value(dist(z, positions[geom::nearest_index(z, positions)])));
    }
    return total.estimate();
}

}  // namespace serial

void HeteroState::validate(const Workspace& ws) const {
    if (positions_a.empty() || positions_b.empty())
        throw std::invalid_argument("coverage: heterogeneous state needs robots of both types");
    if (budgets_a.size() != positions_a.size() || budgets_b.size() != positions_b.size())
        throw std::invalid_argument("coverage: heterogeneous budget counts must match robot counts");
    for (const Vec& p : positions_a)
        if (!ws.contains(p)) throw std::invalid_argument("coverage: initial positions must lie in Q");
    for (const Vec& p : positions_b)
        if (!ws.contains(p)) throw std::invalid_argument("coverage: initial positions must lie in Q");
}

namespace {

bool move_hetero(std::vector<Vec>& positions, const std::vector<double>& budgets, const CostSpec& cost,
                 const Workspace& ws, std::size_t i, const Vec& z, double gamma) {
    const Vec raw = gradient_step(positions[i], z, cost) * gamma;
    const Vec step = geom::saturate(raw, budgets[i]);
    positions[i] = ws.project(positions[i] + step);
    return step.norm() < raw.norm();
}

}  // namespace

HeteroUpdateInfo hetero_update(HeteroState& state, const Workspace& ws, events::EventType type,
                               const Vec& z) {
    if (!ws.contains(z)) throw std::domain_error("coverage: event location outside the workspace");
    const double gamma = state.schedule.at(state.k);
    HeteroUpdateInfo info;
    info.index_a = geom::nearest_index(z, state.positions_a);
    info.index_b = geom::nearest_index(z, state.positions_b);
    const double cost_a = state.cost_a.value(dist(state.positions_a[info.index_a], z));
    const double cost_b = state.cost_b.value(dist(state.positions_b[info.index_b], z));
    switch (type) {
        case events::EventType::A:
            info.event_cost = cost_a;
            info.moved_a = true;
            break;
        case events::EventType::B:
            info.event_cost = cost_b;
            info.moved_b = true;
            break;
        case events::EventType::AB:
            // Both types service the event; only the one incurring the larger
            // cost (the binding term of the max) moves. Tie: the A robot.
            info.event_cost = std::max(cost_a, cost_b);
            if (cost_b > cost_a)
                info.moved_b = true;
            else
                info.moved_a = true;
            break;
    }
    if (info.moved_a)
        move_hetero(state.positions_a, state.budgets_a, state.cost_a, ws, info.index_a, z, gamma);
    if (info.moved_b)
        move_hetero(state.positions_b, state.budgets_b, state.cost_b, ws, info.index_b, z, gamma);
    ++state.k;
    return info;
}

TrackingTrace run_tracking(CoverageState& state, const Workspace& ws, const consensus::CommGraph& graph,
                           events::MarkovTarget& target, long steps, Rng& rng, long record_every) {
    TrackingTrace trace;
    trace.record_every = record_every;
    trace.theta.reserve(steps);
    trace.cost.reserve(steps);
    for (long step = 0; step < steps; ++step) {
        auto [next, z] = events::markov_step(target, rng);
        target = next;
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& p : state.positions) best = std::min(best, state.cost.value(dist(p, z)));
        trace.theta.push_back(target.theta);
        trace.cost.push_back(best);
        trace.locations.push_back(z);
        const UpdateInfo info = adaptive_update(state, ws, graph, z);
        trace.winners.push_back(info.winner);
        trace.stepsizes.push_back(info.stepsize);
        if (record_every > 0 && (step + 1) % record_every == 0) trace.positions.push_back(state.positions);
    }
    return trace;
}

}  // namespace adsim::coverage
