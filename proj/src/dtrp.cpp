#include "adsim/dtrp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adsim/geometry.hpp"
#include "adsim/partition.hpp"

namespace adsim::dtrp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepCap = 1e-2;      // max clock advance per loop iteration
constexpr double kSwapGain = 1e-12;    // minimum 2-opt improvement worth applying
constexpr long kSwapCapFactor = 50;    // applied swaps per tour capped at 50*|P|
}  // namespace

double closed_tour_length(std::span<const Vec> points, std::span<const std::size_t> order) {
    const std::size_t m = order.size();
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        total += dist(points[order[i]], points[order[(i + 1) % m]]);
    return total;
}

TourResult tsp_tour(std::span<const Vec> points, const Vec& start) {
    const std::size_t m = points.size();
    if (m == 0) throw std::invalid_argument("dtrp: tsp_tour needs a nonempty point list");
    TourResult result;
    result.order.reserve(m);
    std::vector<bool> used(m, false);
    Vec cursor = start;
    for (std::size_t step = 0; step < m; ++step) {
        std::size_t best = m;
        double best_d2 = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            if (used[i]) continue;
            const double d2 = dist_sq(cursor, points[i]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        used[best] = true;
        result.order.push_back(best);
        cursor = points[best];
    }
    result.nn_length = closed_tour_length(points, result.order);

    if (m >= 4) {
        auto& order = result.order;
        const long cap = kSwapCapFactor * static_cast<long>(m);
        long applied = 0;
        bool improved = true;
        while (improved && applied < cap) {
            improved = false;
            for (std::size_t i = 0; i + 1 < m && applied < cap; ++i) {
                for (std::size_t j = i + 1; j < m && applied < cap; ++j) {
                    if (i == 0 && j == m - 1) continue;  // whole-cycle reversal, no-op
                    const Vec& a = points[order[(i + m - 1) % m]];
                    const Vec& b = points[order[i]];
                    const Vec& c = points[order[j]];
                    const Vec& d = points[order[(j + 1) % m]];
                    const double delta = dist(a, c) + dist(b, d) - dist(a, b) - dist(c, d);
                    if (delta < -kSwapGain) {
                        std::reverse(order.begin() + static_cast<long>(i),
                                     order.begin() + static_cast<long>(j) + 1);
                        ++applied;
                        improved = true;
                    }
                }
            }
        }
        result.cap_hit = applied >= cap;
    }
    result.length = closed_tour_length(points, result.order);
    return result;
}

// ---------------------------------------------------------------------------
// Robot state machine
// ---------------------------------------------------------------------------

void settle_robot(DtrpRobot& robot, long& tour_cap_hits) {
    if (robot.mode == RobotMode::Servicing) return;
    if (robot.tour_pos < robot.tour.size()) {
        robot.mode = RobotMode::ToEvent;
        return;
    }
    robot.tour.clear();
    robot.tour_pos = 0;
    if (!robot.backlog.empty()) {
        std::vector<Vec> locations;
        locations.reserve(robot.backlog.size());
        for (const DtrpEvent& e : robot.backlog) locations.push_back(e.location);
        const TourResult t = tsp_tour(locations, robot.position);
        if (t.cap_hit) ++tour_cap_hits;
        robot.tour.reserve(robot.backlog.size());
        for (std::size_t idx : t.order) robot.tour.push_back(robot.backlog[idx]);
        robot.backlog.clear();
        robot.mode = RobotMode::ToEvent;
        return;
    }
    robot.mode = robot.position == robot.reference ? RobotMode::Idle : RobotMode::ToReference;
}

double next_milestone(const DtrpRobot& robot, double now) {
    switch (robot.mode) {
        case RobotMode::Idle: return kInf;
        case RobotMode::Servicing: return robot.service_end;
        case RobotMode::ToEvent:
            return now + dist(robot.position, robot.tour[robot.tour_pos].location) / robot.speed;
        case RobotMode::ToReference: return now + dist(robot.position, robot.reference) / robot.speed;
    }
    return kInf;
}

void advance_robot(DtrpRobot& robot, double from, double to, std::vector<CompletedService>& out,
                   long& tour_cap_hits) {
    if (robot.mode == RobotMode::Idle) return;
    if (robot.mode == RobotMode::Servicing) {
        if (to >= robot.service_end) {
            const DtrpEvent& ev = robot.tour[robot.tour_pos];
            const double wait = robot.service_start - ev.arrival;
            out.push_back({ev.id, robot.id, ev.arrival, wait, ev.service, wait + ev.service});
            ++robot.tour_pos;
            robot.mode = RobotMode::Idle;  // leave Servicing before settling
            settle_robot(robot, tour_cap_hits);
        }
        return;
    }
    const Vec target =
        robot.mode == RobotMode::ToEvent ? robot.tour[robot.tour_pos].location : robot.reference;
    const double d = dist(robot.position, target);
    const double milestone = from + d / robot.speed;
    if (to >= milestone) {
        robot.position = target;
        if (robot.mode == RobotMode::ToEvent) {
            robot.mode = RobotMode::Servicing;
            robot.service_start = milestone;
            robot.service_end = milestone + robot.tour[robot.tour_pos].service;
            // A zero-length service still takes effect at `milestone`; the
            // completion is picked up on the next loop visit.
            advance_robot(robot, milestone, to, out, tour_cap_hits);
        } else {
            settle_robot(robot, tour_cap_hits);
        }
        return;
    }
    robot.position += (target - robot.position) * (robot.speed * (to - from) / d);
}

Fleet Fleet::make(std::vector<Vec> generators, std::vector<Vec> initial_positions, double speed,
                  coverage::StepsizeSchedule schedule, double reference_budget) {
    const std::size_t n = generators.size();
    if (n == 0) throw std::invalid_argument("dtrp: fleet needs at least one robot");
    if (initial_positions.size() != n)
        throw std::invalid_argument("dtrp: initial position count must match generator count");
    if (!(speed > 0.0)) throw std::invalid_argument("dtrp: robot speed must be positive");
    if (!(reference_budget > 0.0)) throw std::invalid_argument("dtrp: reference budget must be positive");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (generators[i] == generators[j])
                throw std::invalid_argument("dtrp: generators must be pairwise distinct");
    Fleet fleet;
    fleet.weights.assign(n, 0.0);
    fleet.rates.assign(n, 1.0 / static_cast<double>(n));
    fleet.schedule = schedule;
    fleet.reference_budget = reference_budget;
    fleet.robots.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        DtrpRobot& r = fleet.robots[i];
        r.id = static_cast<int>(i);
        r.generator = generators[i];
        r.reference = initial_positions[i];
        r.position = initial_positions[i];
        r.speed = speed;
        r.mode = RobotMode::Idle;
    }
    return fleet;
}

EventDispatch dtrp_on_event(Fleet& fleet, const Workspace& ws, const consensus::CommGraph& graph,
                            const DtrpEvent& event) {
    if (!ws.contains(event.location)) throw std::domain_error("dtrp: event location outside the workspace");
    const std::size_t n = fleet.robots.size();
    std::vector<double> scores(n);
    for (std::size_t j = 0; j < n; ++j)
        scores[j] = dist_sq(event.location, fleet.robots[j].generator) - fleet.weights[j];
    EventDispatch dispatch;
    dispatch.winner = consensus::winner(scores, graph);
    const double gamma = fleet.schedule.at(fleet.k);
    partition::apply_balancing_increment(fleet.weights, fleet.rates, gamma, dispatch.winner);
    DtrpRobot& winner = fleet.robots[dispatch.winner];
    const Vec raw = coverage::gradient_step(winner.reference, event.location, CostSpec::linear(1.0)) * gamma;
    const Vec step = geom::saturate(raw, fleet.reference_budget);
    dispatch.reference_saturated = step.norm() < raw.norm();
    winner.reference = ws.project(winner.reference + step);
    winner.backlog.push_back(event);
    ++fleet.k;
    return dispatch;
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

namespace {

void finish_metrics(RunMetrics& metrics, long horizon) {
    if (static_cast<long>(metrics.completions.size()) > horizon) {
        metrics.completions.resize(horizon);
        metrics.queue_sizes.resize(horizon);
    }
}

}  // namespace

RunMetrics run_dtrp(Fleet& fleet, const Workspace& ws, const consensus::CommGraph& graph,
                    events::PoissonStream& stream, long horizon_completed, Rng& rng) {
    if (horizon_completed < 1) throw std::invalid_argument("dtrp: horizon must be positive");
    RunMetrics metrics;
    const std::size_t n = fleet.robots.size();
    metrics.rho = stream.rate() * stream.service().mean / static_cast<double>(n);

    double now = 0.0;
    events::PoissonStream::Arrival arrival = stream.next(rng);
    long event_id = 0;
    while (static_cast<long>(metrics.completions.size()) < horizon_completed) {
        double t = arrival.time;
        bool any_active = false;
        for (const DtrpRobot& r : fleet.robots) {
            const double m = next_milestone(r, now);
            if (m < kInf) {
                any_active = true;
                t = std::min(t, m);
            }
        }
        if (any_active) t = std::min(t, now + kStepCap);
        const std::size_t before = metrics.completions.size();
        for (DtrpRobot& r : fleet.robots)
            advance_robot(r, now, t, metrics.completions, metrics.tour_cap_hits);
        for (std::size_t c = before; c < metrics.completions.size(); ++c) {
            std::vector<long> sizes(n);
            for (std::size_t i = 0; i < n; ++i) sizes[i] = fleet.robots[i].outstanding();
            metrics.queue_sizes.push_back(std::move(sizes));
        }
        now = t;
        if (now == arrival.time) {
            ++event_id;
            ++metrics.arrivals;
            const DtrpEvent ev{event_id, arrival.time, arrival.location, arrival.service_time};
            const EventDispatch dispatch = dtrp_on_event(fleet, ws, graph, ev);
            if (dispatch.reference_saturated) ++metrics.saturated_reference_moves;
            for (DtrpRobot& r : fleet.robots) settle_robot(r, metrics.tour_cap_hits);
            arrival = stream.next(rng);
        }
    }
    finish_metrics(metrics, horizon_completed);
    metrics.sim_time = now;
    for (const DtrpRobot& r : fleet.robots) metrics.final_references.push_back(r.reference);
    metrics.final_weights = fleet.weights;
    return metrics;
}

RunMetrics run_light_traffic(LightFleet& fleet, const Workspace& ws, const consensus::CommGraph& graph,
                             events::PoissonStream& stream, long horizon_completed, Rng& rng) {
    if (horizon_completed < 1) throw std::invalid_argument("dtrp: horizon must be positive");
    const std::size_t n = fleet.state.positions.size();
    if (fleet.robot_positions.size() != n || fleet.queues.size() != n || fleet.modes.size() != n ||
        fleet.service_start.size() != n || fleet.service_end.size() != n)
        throw std::invalid_argument("dtrp: light fleet vectors must share the robot count");
    RunMetrics metrics;
    metrics.rho = stream.rate() * stream.service().mean / static_cast<double>(n);

    auto milestone = [&](std::size_t i, double now) {
        switch (fleet.modes[i]) {
            case RobotMode::Idle: return kInf;
            case RobotMode::Servicing: return fleet.service_end[i];
            case RobotMode::ToEvent:
                return now + dist(fleet.robot_positions[i], fleet.queues[i].front().location) /
                                 fleet.speed;
            case RobotMode::ToReference:
                return now + dist(fleet.robot_positions[i], fleet.state.positions[i]) / fleet.speed;
        }
        return kInf;
    };
    auto settle = [&](std::size_t i) {
        if (fleet.modes[i] == RobotMode::Servicing) return;
        if (!fleet.queues[i].empty()) {
            fleet.modes[i] = RobotMode::ToEvent;
            return;
        }
        fleet.modes[i] = fleet.robot_positions[i] == fleet.state.positions[i] ? RobotMode::Idle
                                                                              : RobotMode::ToReference;
    };
    auto advance = [&](std::size_t i, double from, double to) {
        switch (fleet.modes[i]) {
            case RobotMode::Idle: return;
            case RobotMode::Servicing: {
                if (to < fleet.service_end[i]) return;
                const DtrpEvent ev = fleet.queues[i].front();
                fleet.queues[i].pop_front();
                const double wait = fleet.service_start[i] - ev.arrival;
                metrics.completions.push_back(
                    {ev.id, static_cast<int>(i), ev.arrival, wait, ev.service, wait + ev.service});
                std::vector<long> sizes(n);
                for (std::size_t r = 0; r < n; ++r) sizes[r] = static_cast<long>(fleet.queues[r].size());
                metrics.queue_sizes.push_back(std::move(sizes));
                fleet.modes[i] = RobotMode::Idle;  // leave Servicing before settling
                settle(i);
                return;
            }
            case RobotMode::ToEvent:
            case RobotMode::ToReference: {
                const Vec target = fleet.modes[i] == RobotMode::ToEvent
                                       ? fleet.queues[i].front().location
                                       : fleet.state.positions[i];
                const double d = dist(fleet.robot_positions[i], target);
                const double reach = from + d / fleet.speed;
                if (to >= reach) {
                    fleet.robot_positions[i] = target;
                    if (fleet.modes[i] == RobotMode::ToEvent) {
                        fleet.modes[i] = RobotMode::Servicing;
                        fleet.service_start[i] = reach;
                        fleet.service_end[i] = reach + fleet.queues[i].front().service;
                    } else {
                        settle(i);
                    }
                } else {
                    fleet.robot_positions[i] +=
                        (target - fleet.robot_positions[i]) * (fleet.speed * (to - from) / d);
                }
                return;
            }
        }
    };

    double now = 0.0;
    events::PoissonStream::Arrival arrival = stream.next(rng);
    long event_id = 0;
    while (static_cast<long>(metrics.completions.size()) < horizon_completed) {
        double t = arrival.time;
        bool any_active = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = milestone(i, now);
            if (m < kInf) {
                any_active = true;
                t = std::min(t, m);
            }
        }
        if (any_active) t = std::min(t, now + kStepCap);
        for (std::size_t i = 0; i < n; ++i) advance(i, now, t);
        now = t;
        if (now == arrival.time) {
            ++event_id;
            ++metrics.arrivals;
            const coverage::UpdateInfo info = coverage::adaptive_update(fleet.state, ws, graph, arrival.location);
            if (info.saturated) ++metrics.saturated_reference_moves;
            fleet.queues[info.winner].push_back(
                {event_id, arrival.time, arrival.location, arrival.service_time});
            settle(info.winner);
            arrival = stream.next(rng);
        }
    }
    finish_metrics(metrics, horizon_completed);
    metrics.sim_time = now;
    metrics.final_references = fleet.state.positions;
    return metrics;
}

RunSummary summarize(const RunMetrics& metrics) {
    RunSummary summary;
    summary.completed = static_cast<long>(metrics.completions.size());
    summary.rho = metrics.rho;
    if (summary.completed == 0) return summary;
    const long half = summary.completed / 2;
    mc::MomentSum steady;
    for (long i = half; i < summary.completed; ++i)
        steady.add(metrics.completions[static_cast<std::size_t>(i)].system_time);
    const mc::Estimate est = steady.estimate();
    summary.mean_system_steady = est.value;
    summary.se_system_steady = est.se;
    summary.scaled_system = (1.0 - metrics.rho) * (1.0 - metrics.rho) * est.value;
    for (long i = 0; i < summary.completed; ++i) {
        long total = 0;
        for (long q : metrics.queue_sizes[static_cast<std::size_t>(i)]) total = std::max(total, q);
        if (i < half)
            summary.max_queue_first_half = std::max(summary.max_queue_first_half, total);
        else
            summary.max_queue_second_half = std::max(summary.max_queue_second_half, total);
    }
    return summary;
}

}  // namespace adsim::dtrp
