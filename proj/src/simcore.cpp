#include "adsim/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "adsim/dtrp.hpp"
#include "adsim/format.hpp"
#include "adsim/geometry.hpp"

namespace adsim::sim {

namespace {

const char* kComponentSuffix[3] = {"_x", "_y", "_z"};

std::string point_headers(const std::string& base, int dim) {
    std::string out;
    for (int c = 0; c < dim; ++c) {
        if (c) out.push_back(',');
        out += base + kComponentSuffix[c];
    }
    return out;
}

std::string position_headers(const std::string& base, int count, int dim) {
    std::string out;
    for (int i = 0; i < count; ++i) {
        if (i) out.push_back(',');
        out += point_headers(base + std::to_string(i), dim);
    }
    return out;
}

std::string csv(const Vec& v) {
    std::string out;
    for (int c = 0; c < v.dim; ++c) {
        if (c) out.push_back(',');
        out += fmt(v[c]);
    }
    return out;
}

std::string csv(std::span<const Vec> pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out.push_back(',');
        out += csv(pts[i]);
    }
    return out;
}

std::string csv(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out.push_back(',');
        out += fmt(xs[i]);
    }
    return out;
}

std::string blanks(int count) { return std::string(static_cast<std::size_t>(count), ','); }

consensus::CommGraph make_graph(const Scenario& s, std::span<const Vec> agents) {
    if (s.graph_complete) return consensus::CommGraph::complete(static_cast<int>(agents.size()));
    return consensus::CommGraph::r_disk(agents, s.graph_radius);
}

void append_floodmin_rows(std::string& out, long k, std::span<const double> values,
                          const consensus::CommGraph& graph) {
    const consensus::FloodMinResult res = consensus::floodmin(values, graph, true);
    for (std::size_t round = 0; round < res.values_per_round.size(); ++round)
        for (std::size_t agent = 0; agent < res.values_per_round[round].size(); ++agent)
            out += fmt(static_cast<long>(k)) + "," + std::to_string(round) + "," +
                   std::to_string(agent) + "," + fmt(res.values_per_round[round][agent]) + "\n";
}

// Ownership raster + positions dump, stored under a deterministic stem.
void append_snapshot(RunResult& result, const Scenario& s, const std::string& stem,
                     const geom::GeneralizedDiagram& diagram, std::span<const Vec> positions) {
    if (s.workspace.dim() != 2) return;  // rasters are 2-D only
    std::ostringstream raster_text;
    geom::write_raster(
        geom::render_ownership_raster(diagram, s.workspace, s.raster_resolution, s.raster_resolution),
        raster_text);
    result.snapshots.emplace_back(stem + ".raster", raster_text.str());
    std::string pos_text;
    for (const Vec& p : positions) pos_text += fmt(p) + "\n";
    result.snapshots.emplace_back(stem + ".positions", pos_text);
}

void maybe_snapshot(RunResult& result, const Scenario& s, long k,
                    const geom::GeneralizedDiagram& diagram, std::span<const Vec> positions) {
    if (s.snapshot_every <= 0) return;
    if (k % s.snapshot_every != 0 && k != s.events) return;
    append_snapshot(result, s, "snapshot_k" + std::to_string(k), diagram, positions);
}

// Circular mean of robot bearings around the target center.
double mean_angle(std::span<const Vec> positions, const Vec& center) {
    double s = 0.0, c = 0.0;
    for (const Vec& p : positions) {
        const double a = std::atan2(p[1] - center[1], p[0] - center[0]);
        s += std::sin(a);
        c += std::cos(a);
    }
    return std::atan2(s, c);
}

// ---------------------------------------------------------------------------
// coverage
// ---------------------------------------------------------------------------

RunResult run_coverage(const Scenario& s) {
    const int dim = s.workspace.dim();
    coverage::CoverageState state;
    state.positions = s.positions;
    state.budgets.assign(s.positions.size(), s.budget);
    state.cost = s.cost;
    state.schedule = s.schedule;
    state.transient_events = s.transient_events;
    state.detection_radius = s.detection_radius;
    state.validate(s.workspace);

    RunResult result;
    result.trace = "k," + point_headers("z", dim) + ",winner,gamma," +
                   position_headers("p", s.robot_count, dim) + ",objective,objective_se\n";
    if (s.floodmin_trace) result.floodmin_trace = "k,round,agent,value\n";

    const std::uint64_t objective_seed = Rng::derive(s.seed, "objective");
    auto objective_at = [&](long k) {
        return coverage::objective_estimate(state.positions, *s.law, s.cost, s.objective_samples,
                                            Rng::derive(objective_seed, static_cast<std::uint64_t>(k)));
    };
    auto append_row = [&](long k, const std::string& event_cells, bool with_objective) {
        result.trace += fmt(k) + "," + event_cells + "," + csv(state.positions);
        if (with_objective) {
            const mc::Estimate est = objective_at(k);
            result.trace += "," + fmt(est.value) + "," + fmt(est.se);
        } else {
            result.trace += ",,";
        }
        result.trace += "\n";
    };

    const bool objectives = s.objective_every > 0;
    append_row(0, blanks(dim + 1), objectives);

    Rng event_rng = Rng::substream(s.seed, "events");
    consensus::CommGraph complete = consensus::CommGraph::complete(s.robot_count);
    long saturated = 0;
    for (long k = 1; k <= s.events; ++k) {
        const Vec z = s.law->sample(event_rng);
        const consensus::CommGraph graph =
            s.graph_complete ? complete : make_graph(s, state.positions);
        if (s.floodmin_trace)
            append_floodmin_rows(result.floodmin_trace, k, coverage::observed_distances(state, z), graph);
        const coverage::UpdateInfo info = coverage::adaptive_update(state, s.workspace, graph, z);
        if (info.saturated) ++saturated;
        if (k % s.trace_every == 0 || k == s.events)
            append_row(k, csv(z) + "," + std::to_string(info.winner) + "," + fmt(info.stepsize),
                       objectives && k % s.objective_every == 0);
        maybe_snapshot(result, s, k,
                       {state.positions, std::vector<double>(state.positions.size(), 0.0),
                        CostSpec::quadratic()},
                       state.positions);
    }

    result.summary.emplace_back("algorithm", algorithm_name(s.algorithm));
    result.summary.emplace_back("events", fmt(s.events));
    std::string flat;
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        if (i) flat.push_back(' ');
        flat += fmt(state.positions[i]);
    }
    result.summary.emplace_back("final_positions", flat);
    const mc::Estimate final_obj = objective_at(s.events + 1);
    result.summary.emplace_back("final_objective", fmt(final_obj.value));
    result.summary.emplace_back("final_objective_se", fmt(final_obj.se));
    result.summary.emplace_back("saturated_moves", fmt(saturated));
    return result;
}

// ---------------------------------------------------------------------------
// track
// ---------------------------------------------------------------------------

RunResult run_track(const Scenario& s) {
    coverage::CoverageState state;
    state.positions = s.positions;
    state.budgets.assign(s.positions.size(), s.budget);
    state.cost = s.cost;
    state.schedule = s.schedule;
    state.transient_events = s.transient_events;
    state.detection_radius = s.detection_radius;
    state.validate(s.workspace);

    events::MarkovTarget target = s.target;
    Rng rng = Rng::substream(s.seed, "events");
    consensus::CommGraph complete = consensus::CommGraph::complete(s.robot_count);

    RunResult result;
    result.trace = "k,theta,z_x,z_y,winner,gamma,cost," + position_headers("p", s.robot_count, 2) + "\n";
    if (s.floodmin_trace) result.floodmin_trace = "k,round,agent,value\n";
    std::vector<double> costs;
    costs.reserve(s.events);
    for (long k = 1; k <= s.events; ++k) {
        auto [next, z] = events::markov_step(target, rng);
        target = next;
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& p : state.positions) best = std::min(best, s.cost.value(dist(p, z)));
        costs.push_back(best);
        const consensus::CommGraph graph =
            s.graph_complete ? complete : make_graph(s, state.positions);
        if (s.floodmin_trace)
            append_floodmin_rows(result.floodmin_trace, k, coverage::observed_distances(state, z), graph);
        const coverage::UpdateInfo info = coverage::adaptive_update(state, s.workspace, graph, z);
        if (k % s.trace_every == 0 || k == s.events)
            result.trace += fmt(k) + "," + fmt(target.theta) + "," + csv(z) + "," +
                            std::to_string(info.winner) + "," + fmt(info.stepsize) + "," + fmt(best) +
                            "," + csv(state.positions) + "\n";
        maybe_snapshot(result, s, k,
                       {state.positions, std::vector<double>(state.positions.size(), 0.0),
                        CostSpec::quadratic()},
                       state.positions);
    }

    result.summary.emplace_back("algorithm", algorithm_name(s.algorithm));
    result.summary.emplace_back("events", fmt(s.events));
    const long head = std::min<long>(100, s.events);
    double first = 0.0;
    for (long i = 0; i < head; ++i) first += costs[static_cast<std::size_t>(i)];
    if (head > 0) first /= static_cast<double>(head);
    WindowStats tail;
    if (s.events > 0) tail = trailing_window_stats(costs, std::min<long>(s.window, s.events));
    result.summary.emplace_back("first100_cost", fmt(first));
    result.summary.emplace_back("trailing_cost", fmt(tail.mean));
    result.summary.emplace_back("mean_angle", fmt(mean_angle(state.positions, s.target.center)));
    std::string flat;
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        if (i) flat.push_back(' ');
        flat += fmt(state.positions[i]);
    }
    result.summary.emplace_back("final_positions", flat);
    return result;
}

// ---------------------------------------------------------------------------
// hetero
// ---------------------------------------------------------------------------

RunResult run_hetero(const Scenario& s) {
    coverage::HeteroState state;
    state.positions_a = s.positions_a;
    state.positions_b = s.positions_b;
    state.budgets_a.assign(s.positions_a.size(), s.budget);
    state.budgets_b.assign(s.positions_b.size(), s.budget);
    state.cost_a = s.cost_a;
    state.cost_b = s.cost_b;
    state.schedule = s.schedule;
    state.validate(s.workspace);

    events::TypedEventLaw law(s.type_probs, *s.law_a, *s.law_b, *s.law_ab);
    Rng rng = Rng::substream(s.seed, "events");

    RunResult result;
    result.trace = "k,type,z_x,z_y,mover,mover_index,event_cost,ab_count,ab_cum_avg," +
                   position_headers("a", s.count_a, 2) + "," + position_headers("b", s.count_b, 2) +
                   "\n";
    long ab_count = 0;
    double ab_total = 0.0;
    std::string avg_at_100 = "";
    for (long k = 1; k <= s.events; ++k) {
        auto [type, z] = law.sample(rng);
        const coverage::HeteroUpdateInfo info = coverage::hetero_update(state, s.workspace, type, z);
        const char* type_name = type == events::EventType::A   ? "a"
                                : type == events::EventType::B ? "b"
                                                               : "ab";
        if (type == events::EventType::AB) {
            ++ab_count;
            ab_total += info.event_cost;
        }
        const double ab_avg = ab_count > 0 ? ab_total / static_cast<double>(ab_count) : 0.0;
        if (k == 100) avg_at_100 = fmt(ab_avg);
        if (k % s.trace_every == 0 || k == s.events) {
            result.trace += fmt(k) + "," + type_name + "," + csv(z) + "," +
                            (info.moved_a ? "a" : "b") + "," +
                            std::to_string(info.moved_a ? info.index_a : info.index_b) + "," +
                            fmt(info.event_cost) + "," + fmt(ab_count) + "," + fmt(ab_avg) + "," +
                            csv(state.positions_a) + "," + csv(state.positions_b) + "\n";
        }
    }
    result.summary.emplace_back("algorithm", algorithm_name(s.algorithm));
    result.summary.emplace_back("events", fmt(s.events));
    result.summary.emplace_back("ab_count", fmt(ab_count));
    result.summary.emplace_back("ab_cum_avg_at_100", avg_at_100);
    result.summary.emplace_back(
        "ab_cum_avg_final", fmt(ab_count > 0 ? ab_total / static_cast<double>(ab_count) : 0.0));
    std::string flat_a, flat_b;
    for (std::size_t i = 0; i < state.positions_a.size(); ++i) {
        if (i) flat_a.push_back(' ');
        flat_a += fmt(state.positions_a[i]);
    }
    for (std::size_t i = 0; i < state.positions_b.size(); ++i) {
        if (i) flat_b.push_back(' ');
        flat_b += fmt(state.positions_b[i]);
    }
    result.summary.emplace_back("final_positions_a", flat_a);
    result.summary.emplace_back("final_positions_b", flat_b);
    if (s.snapshot_every > 0) {
        append_snapshot(result, s, "snapshot_a_final",
                        {state.positions_a, std::vector<double>(state.positions_a.size(), 0.0),
                         CostSpec::quadratic()},
                        state.positions_a);
        append_snapshot(result, s, "snapshot_b_final",
                        {state.positions_b, std::vector<double>(state.positions_b.size(), 0.0),
                         CostSpec::quadratic()},
                        state.positions_b);
    }
    return result;
}

// ---------------------------------------------------------------------------
// partition
// ---------------------------------------------------------------------------

RunResult run_partition_algo(const Scenario& s) {
    const int dim = s.workspace.dim();
    partition::PartitionState state;
    state.generators = s.generators;
    state.weights.assign(s.generators.size(), 0.0);
    state.rates = s.rates;
    state.cost = s.cost;
    state.schedule = s.schedule;
    state.validate(s.workspace);

    const consensus::CommGraph graph = make_graph(s, state.generators);
    Rng rng = Rng::substream(s.seed, "events");

    RunResult result;
    std::string weight_headers, freq_headers;
    for (int i = 0; i < s.robot_count; ++i) {
        if (i) {
            weight_headers.push_back(',');
            freq_headers.push_back(',');
        }
        weight_headers += "w_" + std::to_string(i);
        freq_headers += "freq_" + std::to_string(i);
    }
    result.trace =
        "k," + point_headers("z", dim) + ",winner," + weight_headers + "," + freq_headers + "\n";
    if (s.floodmin_trace) result.floodmin_trace = "k,round,agent,value\n";

    const std::size_t n = state.generators.size();
    std::deque<std::size_t> window_winners;
    std::vector<long> window_counts(n, 0);
    std::vector<long> total_counts(n, 0);

    result.trace += "0," + blanks(dim) + "," + csv(state.weights) + "," +
                    std::string(static_cast<std::size_t>(s.robot_count) - 1, ',') + "\n";
    for (long k = 1; k <= s.events; ++k) {
        const Vec z = s.law->sample(rng);
        if (s.floodmin_trace) {
            std::vector<double> scores(n);
            for (std::size_t j = 0; j < n; ++j)
                scores[j] = state.cost.value(dist(z, state.generators[j])) - state.weights[j];
            append_floodmin_rows(result.floodmin_trace, k, scores, graph);
        }
        const std::size_t win = partition::partition_update(state, s.workspace, graph, z);
        ++total_counts[win];
        window_winners.push_back(win);
        ++window_counts[win];
        if (static_cast<long>(window_winners.size()) > s.window) {
            --window_counts[window_winners.front()];
            window_winners.pop_front();
        }
        if (k % s.trace_every == 0 || k == s.events) {
            std::vector<double> freq(n);
            for (std::size_t i = 0; i < n; ++i)
                freq[i] = static_cast<double>(window_counts[i]) /
                          static_cast<double>(window_winners.size());
            result.trace += fmt(k) + "," + csv(z) + "," + std::to_string(win) + "," +
                            csv(state.weights) + "," + csv(freq) + "\n";
        }
        maybe_snapshot(result, s, k, state.diagram(), state.generators);
    }

    result.summary.emplace_back("algorithm", algorithm_name(s.algorithm));
    result.summary.emplace_back("events", fmt(s.events));
    result.summary.emplace_back("weights", fmt(std::span<const double>(state.weights)));
    std::vector<double> trailing(n, 0.0), cumulative(n, 0.0);
    double max_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        trailing[i] = window_winners.empty()
                          ? 0.0
                          : static_cast<double>(window_counts[i]) /
                                static_cast<double>(window_winners.size());
        cumulative[i] =
            s.events > 0 ? static_cast<double>(total_counts[i]) / static_cast<double>(s.events) : 0.0;
        max_gap = std::max(max_gap, std::abs(trailing[i] - state.rates[i]));
    }
    result.summary.emplace_back("trailing_freq", fmt(std::span<const double>(trailing)));
    result.summary.emplace_back("cumulative_freq", fmt(std::span<const double>(cumulative)));
    result.summary.emplace_back("max_rate_gap", fmt(max_gap));
    double weight_sum = 0.0;
    for (double w : state.weights) weight_sum += w;
    result.summary.emplace_back("weight_sum", fmt(weight_sum));
    return result;
}

// ---------------------------------------------------------------------------
// dtrp / dtrp_light
// ---------------------------------------------------------------------------

std::string queue_headers(int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out.push_back(',');
        out += "queue_" + std::to_string(i);
    }
    return out;
}

void append_dtrp_rows(RunResult& result, const dtrp::RunMetrics& metrics, long trace_every) {
    for (std::size_t i = 0; i < metrics.completions.size(); ++i) {
        const long row = static_cast<long>(i) + 1;
        if (row % trace_every != 0 && i + 1 != metrics.completions.size()) continue;
        const dtrp::CompletedService& c = metrics.completions[i];
        std::string sizes;
        for (std::size_t r = 0; r < metrics.queue_sizes[i].size(); ++r) {
            if (r) sizes.push_back(',');
            sizes += fmt(metrics.queue_sizes[i][r]);
        }
        result.trace += fmt(c.event_id) + "," + fmt(c.arrival) + "," + std::to_string(c.robot) + "," +
                        fmt(c.wait) + "," + fmt(c.service) + "," + fmt(c.system_time) + "," + sizes +
                        "\n";
    }
}

void append_dtrp_summary(RunResult& result, const Scenario& s, const dtrp::RunMetrics& metrics) {
    const dtrp::RunSummary summary = dtrp::summarize(metrics);
    result.summary.emplace_back("algorithm", algorithm_name(s.algorithm));
    result.summary.emplace_back("completed", fmt(summary.completed));
    result.summary.emplace_back("arrivals", fmt(metrics.arrivals));
    result.summary.emplace_back("rho", fmt(metrics.rho));
    result.summary.emplace_back("sim_time", fmt(metrics.sim_time));
    result.summary.emplace_back("mean_system_steady", fmt(summary.mean_system_steady));
    result.summary.emplace_back("se_system_steady", fmt(summary.se_system_steady));
    result.summary.emplace_back("scaled_system", fmt(summary.scaled_system));
    result.summary.emplace_back("max_queue_first_half", fmt(summary.max_queue_first_half));
    result.summary.emplace_back("max_queue_second_half", fmt(summary.max_queue_second_half));
    result.summary.emplace_back("saturated_reference_moves", fmt(metrics.saturated_reference_moves));
    result.summary.emplace_back("tour_cap_hits", fmt(metrics.tour_cap_hits));
    std::string refs;
    for (std::size_t i = 0; i < metrics.final_references.size(); ++i) {
        if (i) refs.push_back(' ');
        refs += fmt(metrics.final_references[i]);
    }
    result.summary.emplace_back("final_references", refs);
    if (!metrics.final_weights.empty())
        result.summary.emplace_back("final_weights", fmt(std::span<const double>(metrics.final_weights)));
}

RunResult run_dtrp_algo(const Scenario& s) {
    dtrp::Fleet fleet = dtrp::Fleet::make(s.generators, s.positions, s.speed, s.schedule,
                                          s.speed / s.lambda);
    events::PoissonStream stream(s.lambda, *s.law, s.service);
    const consensus::CommGraph graph = make_graph(s, s.generators);
    Rng rng = Rng::substream(s.seed, "events");

    RunResult result;
    result.trace = "k,arrival,robot,wait,service,system," + queue_headers(s.robot_count) + "\n";
    dtrp::RunMetrics metrics = dtrp::run_dtrp(fleet, s.workspace, graph, stream, s.events, rng);
    append_dtrp_rows(result, metrics, s.trace_every);
    append_dtrp_summary(result, s, metrics);
    if (s.snapshot_every > 0)
        append_snapshot(result, s, "snapshot_final",
                        {s.generators, metrics.final_weights, CostSpec::quadratic()},
                        metrics.final_references);
    return result;
}

RunResult run_dtrp_light_algo(const Scenario& s) {
    dtrp::LightFleet fleet;
    fleet.state.positions = s.positions;
    fleet.state.budgets.assign(s.positions.size(), s.speed / s.lambda);
    fleet.state.cost = CostSpec::linear(s.speed);
    fleet.state.schedule = s.schedule;
    fleet.state.validate(s.workspace);
    fleet.robot_positions = s.positions;
    fleet.queues.assign(s.positions.size(), {});
    fleet.modes.assign(s.positions.size(), dtrp::RobotMode::Idle);
    fleet.service_start.assign(s.positions.size(), 0.0);
    fleet.service_end.assign(s.positions.size(), 0.0);
    fleet.speed = s.speed;

    events::PoissonStream stream(s.lambda, *s.law, s.service);
    const consensus::CommGraph graph = make_graph(s, s.positions);
    Rng rng = Rng::substream(s.seed, "events");

    RunResult result;
    result.trace = "k,arrival,robot,wait,service,system," + queue_headers(s.robot_count) + "\n";
    dtrp::RunMetrics metrics =
        dtrp::run_light_traffic(fleet, s.workspace, graph, stream, s.events, rng);
    append_dtrp_rows(result, metrics, s.trace_every);
    append_dtrp_summary(result, s, metrics);
    const mc::Estimate travel = coverage::objective_estimate(
        metrics.final_references, *s.law, CostSpec::linear(s.speed), s.objective_samples,
        Rng::derive(s.seed, "light-bound"));
    result.summary.emplace_back("lower_bound_estimate", fmt(travel.value + s.service.mean));
    result.summary.emplace_back("lower_bound_se", fmt(travel.se));
    return result;
}

}  // namespace

std::string RunResult::summary_text() const {
    std::string out;
    for (const auto& [key, value] : summary) out += key + " = " + value + "\n";
    return out;
}

std::string RunResult::find(const std::string& key) const {
    for (const auto& [k, v] : summary)
        if (k == key) return v;
    return "";
}

RunResult run(const Scenario& s) {
    switch (s.algorithm) {
        case Algorithm::Coverage: return run_coverage(s);
        case Algorithm::Track: return run_track(s);
        case Algorithm::Hetero: return run_hetero(s);
        case Algorithm::Partition: return run_partition_algo(s);
        case Algorithm::Dtrp: return run_dtrp_algo(s);
        case Algorithm::DtrpLight: return run_dtrp_light_algo(s);
    }
    throw std::logic_error("sim: unknown algorithm");
}

WindowStats trailing_window_stats(std::span<const double> series, long window) {
    if (series.empty()) throw std::invalid_argument("sim: trailing stats need a nonempty series");
    if (window < 1 || window > static_cast<long>(series.size()))
        throw std::invalid_argument("sim: window must be between 1 and the series length");
    const std::size_t begin = series.size() - static_cast<std::size_t>(window);
    WindowStats stats;
    for (std::size_t i = begin; i < series.size(); ++i) stats.mean += series[i];
    stats.mean /= static_cast<double>(window);
    if (window == 1) return stats;
    const double xbar = (static_cast<double>(window) - 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0;
    for (long i = 0; i < window; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (series[begin + static_cast<std::size_t>(i)] - stats.mean);
        sxx += dx * dx;
    }
    stats.slope = sxy / sxx;
    return stats;
}

}  // namespace adsim::sim
