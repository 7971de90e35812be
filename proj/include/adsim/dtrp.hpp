#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "adsim/consensus.hpp"
#include "adsim/coverage.hpp"
#include "adsim/events.hpp"
#include "adsim/vec.hpp"
#include "adsim/workspace.hpp"

namespace adsim::dtrp {

// ---------------------------------------------------------------------------
// Euclidean TSP heuristic: nearest-neighbor order seeded at the robot's
// current position, then 2-opt on the closed tour until no improving swap
// remains or the cap of 50*|P| applied swaps is reached.
// ---------------------------------------------------------------------------

struct TourResult {
    std::vector<std::size_t> order;  // permutation of the input points
    double length = 0.0;             // closed-tour length after 2-opt
    double nn_length = 0.0;          // closed-tour length of the nearest-neighbor order
    bool cap_hit = false;
};

TourResult tsp_tour(std::span<const Vec> points, const Vec& start);
double closed_tour_length(std::span<const Vec> points, std::span<const std::size_t> order);

// ---------------------------------------------------------------------------
// Adaptive stabilizing policy. Each robot carries a fixed generator, a
// balancing weight (rates 1/n, same arithmetic as the partitioning module),
// a reference position, a backlog of unscheduled events and an active tour
// that is never re-planned mid-flight.
// ---------------------------------------------------------------------------

struct DtrpEvent {
    long id = 0;
    double arrival = 0.0;
    Vec location;
    double service = 0.0;
};

enum class RobotMode { ToReference, Idle, ToEvent, Servicing };

struct CompletedService {
    long event_id = 0;
    int robot = 0;
    double arrival = 0.0;
    double wait = 0.0;
    double service = 0.0;
    double system_time = 0.0;  // wait + service
};

struct DtrpRobot {
    int id = 0;
    Vec generator;
    Vec reference;
    Vec position;
    double speed = 1.0;
    std::vector<DtrpEvent> backlog;  // arrival order
    std::vector<DtrpEvent> tour;     // service order
    std::size_t tour_pos = 0;
    RobotMode mode = RobotMode::Idle;
    double service_start = 0.0;
    double service_end = 0.0;

    long outstanding() const {
        return static_cast<long>(backlog.size()) + static_cast<long>(tour.size() - tour_pos);
    }
};

// Instantaneous transitions at time `now`: promote the backlog to a fresh
// tour when the active tour is exhausted, otherwise head for the next tour
// stop or back toward the reference.
void settle_robot(DtrpRobot& robot, long& tour_cap_hits);

// Earliest time at which the robot's state changes on its own (arrival at a
// destination or end of the current service); +infinity when idle.
double next_milestone(const DtrpRobot& robot, double now);

// Advance the robot from `from` to `to`, with `to` at or before the robot's
// next milestone; completions are appended as they happen.
void advance_robot(DtrpRobot& robot, double from, double to, std::vector<CompletedService>& out,
                   long& tour_cap_hits);

struct Fleet {
    std::vector<DtrpRobot> robots;
    std::vector<double> weights;
    std::vector<double> rates;  // all 1/n
    coverage::StepsizeSchedule schedule;
    double reference_budget = 1.0;  // saturation bound on reference moves
    long k = 0;                     // events dispatched so far

    static Fleet make(std::vector<Vec> generators, std::vector<Vec> initial_positions, double speed,
                      coverage::StepsizeSchedule schedule, double reference_budget);
};

struct EventDispatch {
    std::size_t winner = 0;
    bool reference_saturated = false;
};

// Weight update (winner gamma*(1/n - 1), others gamma/n), reference pull
// toward the event, and backlog insertion for the winner. The winner is
// decided by consensus on ||z - g_j||^2 - w_j.
EventDispatch dtrp_on_event(Fleet& fleet, const Workspace& ws, const consensus::CommGraph& graph,
                            const DtrpEvent& event);

// ---------------------------------------------------------------------------
// Event-driven runs.
// ---------------------------------------------------------------------------

struct RunMetrics {
    std::vector<CompletedService> completions;
    std::vector<std::vector<long>> queue_sizes;  // per completion, per robot
    double rho = 0.0;
    double sim_time = 0.0;
    long arrivals = 0;
    long saturated_reference_moves = 0;
    long tour_cap_hits = 0;
    std::vector<Vec> final_references;
    std::vector<double> final_weights;
};

struct RunSummary {
    long completed = 0;
    double rho = 0.0;
    double mean_system_steady = 0.0;  // mean system time over the last half of completions
    double se_system_steady = 0.0;
    double scaled_system = 0.0;  // (1-rho)^2 * steady mean
    long max_queue_first_half = 0;
    long max_queue_second_half = 0;
};

RunSummary summarize(const RunMetrics& metrics);

// The stabilizing policy (partition weights + per-region TSP batching). Runs
// until `horizon_completed` services have finished. The simulation clock
// advances to the next arrival or robot milestone, capped at 1e-2 time units
// per step.
RunMetrics run_dtrp(Fleet& fleet, const Workspace& ws, const consensus::CommGraph& graph,
                    events::PoissonStream& stream, long horizon_completed, Rng& rng);

// The light-traffic policy: reference positions follow the adaptive coverage
// law for the travel-time cost f(x) = x/v; the winner (closest reference)
// serves each event from wherever it currently is, then returns toward its
// reference. Per-robot FIFO queues absorb the rare overlap.
struct LightFleet {
    coverage::CoverageState state;  // reference positions, linear cost 1/v
    std::vector<Vec> robot_positions;
    std::vector<std::deque<DtrpEvent>> queues;
    std::vector<RobotMode> modes;
    std::vector<double> service_start;
    std::vector<double> service_end;
    double speed = 1.0;
};

RunMetrics run_light_traffic(LightFleet& fleet, const Workspace& ws, const consensus::CommGraph& graph,
                             events::PoissonStream& stream, long horizon_completed, Rng& rng);

}  // namespace adsim::dtrp
