#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "adsim/consensus.hpp"
#include "adsim/cost.hpp"
#include "adsim/events.hpp"
#include "adsim/mc.hpp"
#include "adsim/vec.hpp"
#include "adsim/workspace.hpp"

namespace adsim::coverage {

// Stepsize sequence gamma_k. The harmonic family with d > 0 satisfies the
// classical divergent-sum / square-summable condition; a constant stepsize
// trades convergence for tracking ability.
struct StepsizeSchedule {
    enum class Kind { Harmonic, Constant };

    Kind kind = Kind::Harmonic;
    double c = 1.0;  // harmonic: c / (1 + d*k); constant: c
    double d = 1.0;

    double at(long k) const {
        return kind == Kind::Constant ? c : c / (1.0 + d * static_cast<double>(k));
    }
    static StepsizeSchedule harmonic(double c, double d);
    static StepsizeSchedule constant(double c);
    bool square_summable() const { return kind == Kind::Harmonic && d > 0.0; }
};

// Reference positions of the fleet between events. Positions stay inside Q
// and pairwise distinct after every update.
struct CoverageState {
    std::vector<Vec> positions;
    std::vector<double> budgets;  // per-event velocity budget v_{i,k}, one per robot
    CostSpec cost;
    StepsizeSchedule schedule;
    long k = 0;
    long transient_events = 0;  // first K0 events: all agents move, stepsize gamma_k/(1+k)
    double detection_radius = std::numeric_limits<double>::infinity();

    void validate(const Workspace& ws) const;
};

// Single-sample descent direction at robot position p for an event at z:
// f'(||p-z||) * (z-p)/||p-z||, and zero at an exact coincidence. This is the
// negated integrand of the coverage objective's partial derivative.
Vec gradient_step(const Vec& p, const Vec& z, const CostSpec& cost);

struct UpdateInfo {
    std::size_t winner = 0;
    double stepsize = 0.0;
    bool saturated = false;
    bool transient = false;
};

// Distances each robot would feed into the consensus round: ||p_i - z||, or
// +infinity beyond the detection radius.
std::vector<double> observed_distances(const CoverageState& state, const Vec& z);

// One event of the adaptive law: the consensus winner (closest robot) moves by
// the saturated, projected stochastic gradient step; everyone else stays put.
// During the transient phase every agent applies the move.
UpdateInfo adaptive_update(CoverageState& state, const Workspace& ws, const consensus::CommGraph& graph,
                           const Vec& z);

// Monte Carlo estimate of the coverage objective E[min_i f(||p_i - Z||)].
mc::Estimate objective_estimate(std::span<const Vec> positions, const events::SpatialDistribution& law,
                                const CostSpec& cost, long samples, std::uint64_t seed);

// Monte Carlo estimate of the objective gradient: the integrand routed to the
// nearest robot's cell, averaged. Componentwise standard errors returned
// alongside, sized like the mean.
struct GradientEstimate {
    std::vector<Vec> mean;
    std::vector<Vec> se;
};

GradientEstimate deterministic_gradient(std::span<const Vec> positions,
                                        const events::SpatialDistribution& law, const CostSpec& cost,
                                        long samples, std::uint64_t seed);

namespace serial {
mc::Estimate objective_estimate(std::span<const Vec> positions, const events::SpatialDistribution& law,
                                const CostSpec& cost, long samples, std::uint64_t seed);
GradientEstimate deterministic_gradient(std::span<const Vec> positions,
                                        const events::SpatialDistribution& law, const CostSpec& cost,
                                        long samples, std::uint64_t seed);
}  // namespace serial

// Two robot types, three event types. A type-ab event is serviced by the
// closest robot of each type; only the one with the larger servicing cost
// moves (ties go to the A robot).
struct HeteroState {
    std::vector<Vec> positions_a;
    std::vector<Vec> positions_b;
    std::vector<double> budgets_a;
    std::vector<double> budgets_b;
    CostSpec cost_a;
    CostSpec cost_b;
    StepsizeSchedule schedule;
    long k = 0;

    void validate(const Workspace& ws) const;
};

struct HeteroUpdateInfo {
    bool moved_a = false;
    bool moved_b = false;
    std::size_t index_a = 0;  // closest A robot (mover when moved_a)
    std::size_t index_b = 0;
    double event_cost = 0.0;  // servicing cost of this event at pre-update positions
};

HeteroUpdateInfo hetero_update(HeteroState& state, const Workspace& ws, events::EventType type,
                               const Vec& z);

// Markov-target tracking: advance the target, service with the adaptive law,
// record the per-step servicing cost (at pre-update positions).
struct TrackingTrace {
    std::vector<double> theta;
    std::vector<double> cost;
    std::vector<Vec> locations;
    std::vector<std::size_t> winners;
    std::vector<double> stepsizes;
    std::vector<std::vector<Vec>> positions;  // recorded every `record_every` steps
    long record_every = 1;
};

TrackingTrace run_tracking(CoverageState& state, const Workspace& ws, const consensus::CommGraph& graph,
                           events::MarkovTarget& target, long steps, Rng& rng, long record_every = 1);

}  // namespace adsim::coverage
