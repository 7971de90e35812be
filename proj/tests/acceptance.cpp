// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each run is fully seeded, so every verdict is reproducible bit for bit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "adsim/dtrp.hpp"
#include "adsim/geometry.hpp"
#include "adsim/partition.hpp"
#include "adsim/simcore.hpp"

using namespace adsim;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] C%-2d %s  (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

double elapsed(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string scenario_path(const std::string& name) {
    return std::string(ADSIM_SCENARIO_DIR) + "/" + name;
}

const Workspace kSquare = Workspace::unit_square();
const Workspace kLine = Workspace::interval(0, 1);

std::vector<Vec> distinct_points(Rng& rng, int n, const Workspace& ws, double min_gap) {
    std::vector<Vec> out;
    while (static_cast<int>(out.size()) < n) {
        Vec cand = Vec::zero(ws.dim());
        for (int c = 0; c < ws.dim(); ++c) cand[c] = rng.uniform(ws.bounds_lo()[c], ws.bounds_hi()[c]);
        bool ok = true;
        for (const Vec& p : out) ok = ok && dist(p, cand) > min_gap;
        if (ok) out.push_back(cand);
    }
    return out;
}

// --------------------------------------------------------------------------
// C1: two robots on [0,1] settle at (1/4, 3/4)
// --------------------------------------------------------------------------
void criterion1() {
    const auto start = std::chrono::steady_clock::now();
    const auto law = events::SpatialDistribution::uniform(kLine);
    const auto graph = consensus::CommGraph::complete(2);
    int good = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng init = Rng::substream(seed, "init-positions");
        coverage::CoverageState st;
        st.positions = distinct_points(init, 2, kLine, 1e-6);
        st.budgets = {1.0, 1.0};
        st.cost = CostSpec::quadratic();
        st.schedule = coverage::StepsizeSchedule::harmonic(0.5, 0.01);
        Rng rng = Rng::substream(seed, "events");
        for (long k = 0; k < 20000; ++k) coverage::adaptive_update(st, kLine, graph, law.sample(rng));
        double lo = st.positions[0][0], hi = st.positions[1][0];
        if (lo > hi) std::swap(lo, hi);
        const double err = std::max(std::abs(lo - 0.25), std::abs(hi - 0.75));
        worst = std::max(worst, err);
        if (err <= 0.03) ++good;
    }
    const double secs = elapsed(start);
    char detail[160];
    std::snprintf(detail, sizeof detail, "%d/10 seeds within 0.03, worst dev %.4f, %.2fs", good,
                  worst, secs);
    report(1, "1-D two-robot equilibrium at (0.25, 0.75)", good >= 9 && secs < 5.0, detail);
}

// --------------------------------------------------------------------------
// C2: stochastic increments are unbiased estimates of the objective gradient
// --------------------------------------------------------------------------
void criterion2() {
    const auto law = events::SpatialDistribution::uniform(kSquare);
    Rng cfg_rng(20260810);
    int bad_components = 0;
    int total_components = 0;
    double worst_z = 0.0;
    for (int cfg = 0; cfg < 20; ++cfg) {
        const int n = 1 + cfg % 3;
        const CostSpec cost = (cfg / 3) % 2 == 0 ? CostSpec::linear(1.0) : CostSpec::quadratic();
        const std::vector<Vec> p = distinct_points(cfg_rng, n, kSquare, 0.05);

        std::vector<Vec> sum(p.size(), Vec::zero(2)), sum_sq(p.size(), Vec::zero(2));
        const long events = 100000;
        Rng rng = Rng::substream(777, static_cast<std::uint64_t>(cfg));
        for (long s = 0; s < events; ++s) {
            const Vec z = law.sample(rng);
            const std::size_t w = geom::nearest_index(z, p);
            const Vec inc = coverage::gradient_step(p[w], z, cost);
            for (int c = 0; c < 2; ++c) {
                sum[w][c] += inc[c];
                sum_sq[w][c] += inc[c] * inc[c];
            }
        }
        const auto det = coverage::deterministic_gradient(
            p, law, cost, 1000000, Rng::derive(888, static_cast<std::uint64_t>(cfg)));
        for (std::size_t i = 0; i < p.size(); ++i)
            for (int c = 0; c < 2; ++c) {
                const double mean = sum[i][c] / events;
                const double var = std::max(0.0, sum_sq[i][c] / events - mean * mean);
                const double se = std::sqrt(var / events);
                const double combined = std::sqrt(se * se + det.se[i][c] * det.se[i][c]);
                const double z = std::abs(-mean - det.mean[i][c]) / std::max(combined, 1e-300);
                worst_z = std::max(worst_z, z);
                ++total_components;
                if (z > 3.0) ++bad_components;
            }
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "%d/%d components beyond 3 combined SE, worst z=%.2f",
                  bad_components, total_components, worst_z);
    report(2, "gradient unbiasedness over 20 configurations", bad_components == 0, detail);
}

// --------------------------------------------------------------------------
// C3: partitioning drives utilization to the target rates
// --------------------------------------------------------------------------
void criterion3() {
    const auto start = std::chrono::steady_clock::now();

    // 1-D benchmark with the analytic optimum w2 - w1 = 0.2
    partition::PartitionState st;
    st.generators = {Vec(0.25), Vec(0.75)};
    st.weights = {0.0, 0.0};
    st.rates = {0.3, 0.7};
    st.cost = CostSpec::quadratic();
    st.schedule = coverage::StepsizeSchedule::harmonic(10.0, 0.05);
    const auto law1 = events::SpatialDistribution::uniform(kLine);
    Rng rng = Rng::substream(14, "events");
    const auto run1 = partition::run_partition(st, kLine, consensus::CommGraph::complete(2), law1,
                                               20000, rng, 1000);
    const double gap = run1.final_weights[1] - run1.final_weights[0];
    const bool ok1 = std::abs(run1.trailing_frequencies[0] - 0.3) <= 0.03 &&
                     std::abs(run1.trailing_frequencies[1] - 0.7) <= 0.03 &&
                     std::abs(gap - 0.2) <= 0.05;

    // 10 cells on the unit square
    partition::PartitionState st10;
    st10.generators = partition::default_generators(10, kSquare);
    st10.weights.assign(10, 0.0);
    st10.rates = {0.05, 0.05, 0.05, 0.05, 0.1, 0.1, 0.1, 0.1, 0.2, 0.2};
    st10.cost = CostSpec::quadratic();
    st10.schedule = coverage::StepsizeSchedule::harmonic(10.0, 0.01);
    const auto law2 = events::SpatialDistribution::uniform(kSquare);
    Rng rng10 = Rng::substream(5, "events");
    const auto run10 = partition::run_partition(st10, kSquare, consensus::CommGraph::complete(10),
                                                law2, 10000, rng10, 1000);
    double worst10 = 0.0;
    for (int i = 0; i < 10; ++i)
        worst10 = std::max(worst10, std::abs(run10.trailing_frequencies[i] - st10.rates[i]));
    const double secs = elapsed(start);
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "1-D freq (%.3f, %.3f), w-gap %.3f; n=10 worst freq dev %.3f; %.2fs",
                  run1.trailing_frequencies[0], run1.trailing_frequencies[1], gap, worst10, secs);
    report(3, "partition utilization constraints", ok1 && worst10 <= 0.04 && secs < 10.0, detail);
}

// --------------------------------------------------------------------------
// C4: dual supergradient inequality, translation invariance, zero weight sum
// --------------------------------------------------------------------------
void criterion4() {
    const auto law = events::SpatialDistribution::uniform(kSquare);
    partition::PartitionState base;
    base.generators = partition::default_generators(5, kSquare);
    base.rates = {0.15, 0.2, 0.25, 0.3, 0.1};
    base.cost = CostSpec::quadratic();
    base.schedule = coverage::StepsizeSchedule::harmonic(1.0, 0.05);

    Rng rng(4040);
    std::vector<std::vector<double>> ws(20, std::vector<double>(5));
    for (auto& w : ws)
        for (double& x : w) x = rng.uniform(-0.15, 0.15);

    // Single-pass statistic for h(w') - h(w) - <g(w), w'-w>: per sample,
    // x = min_i(c_i - w'_i) - min_i(c_i - w_i) + (w'_own - w_own) where own is
    // the owner under w. Nonpositive pointwise; the test uses 3 SE as stated.
    int bad_pairs = 0;
    double worst_pair = -1e300;
    auto cost_to = [&](const Vec& z, std::size_t i) {
        return base.cost.value(dist(z, base.generators[i]));
    };
    for (int pair = 0; pair < 50; ++pair) {
        const std::size_t wi = static_cast<std::size_t>(rng.uniform(0, 20));
        std::size_t wj = static_cast<std::size_t>(rng.uniform(0, 19));
        if (wj >= wi) ++wj;  // distinct vectors, the identical pair is trivial
        const auto& w = ws[wi];
        const auto& wp = ws[wj];
        Rng srng = Rng::substream(4100, static_cast<std::uint64_t>(pair));
        mc::MomentSum acc;
        for (long s = 0; s < 100000; ++s) {
            const Vec z = law.sample(srng);
            double u = 1e300, up = 1e300;
            std::size_t own = 0;
            for (std::size_t i = 0; i < 5; ++i) {
                const double c = cost_to(z, i);
                if (c - w[i] < u) {
                    u = c - w[i];
                    own = i;
                }
                up = std::min(up, c - wp[i]);
            }
            acc.add(up - u + (wp[own] - w[own]));
        }
        const auto est = acc.estimate();
        worst_pair = std::max(worst_pair, est.value - 3 * est.se);
        if (est.value > 3 * est.se + 1e-12) ++bad_pairs;  // epsilon floor for exact-equality pairs
    }

    // concavity along segments, same single-pass idea
    int bad_segments = 0;
    for (int trial = 0; trial < 15; ++trial) {
        const auto& w = ws[static_cast<std::size_t>(rng.uniform(0, 20))];
        const auto& wp = ws[static_cast<std::size_t>(rng.uniform(0, 20))];
        for (const double t : {0.25, 0.5, 0.75}) {
            Rng srng = Rng::substream(4200, static_cast<std::uint64_t>(trial * 4) + 1);
            mc::MomentSum acc;
            for (long s = 0; s < 40000; ++s) {
                const Vec z = law.sample(srng);
                double u = 1e300, up = 1e300, ut = 1e300;
                for (std::size_t i = 0; i < 5; ++i) {
                    const double c = cost_to(z, i);
                    u = std::min(u, c - w[i]);
                    up = std::min(up, c - wp[i]);
                    ut = std::min(ut, c - (t * w[i] + (1 - t) * wp[i]));
                }
                acc.add(ut - t * u - (1 - t) * up);
            }
            const auto est = acc.estimate();
            if (est.value < -3 * est.se) ++bad_segments;
        }
    }

    // translation invariance of the dual value, same seed
    double worst_shift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        base.weights = ws[static_cast<std::size_t>(trial)];
        const double h0 = partition::dual_value(base, law, 50000, 4321).value;
        partition::PartitionState shifted = base;
        const double t = rng.uniform(-1.0, 1.0);
        for (double& x : shifted.weights) x += t;
        const double h1 = partition::dual_value(shifted, law, 50000, 4321).value;
        worst_shift = std::max(worst_shift, std::abs(h1 - h0));
    }

    // bitwise weight-sum conservation along a real run
    partition::PartitionState st = base;
    st.weights.assign(5, 0.0);
    Rng erng = Rng::substream(4300, "events");
    bool sum_zero = true;
    for (long k = 0; k < 20000; ++k) {
        partition::partition_update(st, kSquare, consensus::CommGraph::complete(5), law.sample(erng));
        double total = 0.0;
        for (double x : st.weights) total += x;
        sum_zero = sum_zero && total == 0.0;
    }

    char detail[220];
    std::snprintf(detail, sizeof detail,
                  "pairs beyond 3SE: %d/50 (worst margin %.2e); segments: %d/45; shift dev %.1e; "
                  "weight sum bitwise zero: %s",
                  bad_pairs, worst_pair, bad_segments, worst_shift, sum_zero ? "yes" : "no");
    report(4, "supergradient and dual identities",
           bad_pairs == 0 && bad_segments == 0 && worst_shift <= 1e-9 && sum_zero, detail);
}

// --------------------------------------------------------------------------
// C5: FloodMin equals the centralized argmin on every small connected graph
// --------------------------------------------------------------------------
void criterion5() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(5050);
    long graphs = 0, vectors = 0, mismatches = 0;
    for (int n = 1; n <= 5; ++n) {
        std::vector<std::pair<int, int>> all_edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) all_edges.emplace_back(i, j);
        const int m = static_cast<int>(all_edges.size());
        for (long mask = 0; mask < (1L << m); ++mask) {
            std::vector<std::pair<int, int>> edges;
            for (int e = 0; e < m; ++e)
                if (mask & (1L << e)) edges.push_back(all_edges[e]);
            consensus::CommGraph graph = consensus::CommGraph::complete(1);
            try {
                graph = consensus::CommGraph::from_edges(n, edges);
            } catch (const std::invalid_argument&) {
                continue;  // disconnected
            }
            ++graphs;
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<double> values(n);
                for (double& v : values) {
                    const double u = rng.uniform(0, 1);
                    v = u < 0.15 ? std::numeric_limits<double>::infinity()
                                 : (u < 0.5 ? std::floor(rng.uniform(0, 3)) : rng.uniform(0, 1));
                }
                bool any = false;
                for (double v : values) any = any || std::isfinite(v);
                if (!any) values[trial % n] = 1.0;
                ++vectors;
                const auto flags = consensus::floodmin(values, graph).flags;
                double best = std::numeric_limits<double>::infinity();
                for (double v : values) best = std::min(best, v);
                for (int i = 0; i < n; ++i)
                    if (flags[i] != (values[i] == best)) ++mismatches;
            }
        }
    }
    const double secs = elapsed(start);
    char detail[160];
    std::snprintf(detail, sizeof detail, "%ld graphs x 100 vectors (%ld runs), %ld mismatches, %.2fs",
                  graphs, vectors, mismatches, secs);
    report(5, "FloodMin equals centralized argmin", mismatches == 0 && secs < 5.0, detail);
}

// --------------------------------------------------------------------------
// C6: DTRP at rho = 0.7 is stable (flat trailing system time, bounded backlog)
// --------------------------------------------------------------------------
void criterion6() {
    const auto scenario = sim::load_scenario(scenario_path("dtrp_stability.ini"));
    dtrp::Fleet fleet =
        dtrp::Fleet::make(scenario.generators, scenario.positions, scenario.speed, scenario.schedule,
                          scenario.speed / scenario.lambda);
    events::PoissonStream stream(scenario.lambda, *scenario.law, scenario.service);
    Rng rng = Rng::substream(scenario.seed, "events");
    const auto metrics = dtrp::run_dtrp(fleet, scenario.workspace,
                                        consensus::CommGraph::complete(scenario.robot_count), stream,
                                        scenario.events, rng);
    const auto summary = dtrp::summarize(metrics);

    // Trailing-mean slope over the last half, batch means against batch index.
    const long total = static_cast<long>(metrics.completions.size());
    const long half = total / 2;
    const int batches = 20;
    const long per = half / batches;
    std::vector<double> ys(batches, 0.0);
    for (int b = 0; b < batches; ++b) {
        for (long i = 0; i < per; ++i)
            ys[b] += metrics.completions[static_cast<std::size_t>(half + b * per + i)].system_time;
        ys[b] /= static_cast<double>(per);
    }
    const double xbar = (batches - 1) / 2.0;
    double ybar = 0.0;
    for (double y : ys) ybar += y;
    ybar /= batches;
    double sxy = 0.0, sxx = 0.0;
    for (int b = 0; b < batches; ++b) {
        sxy += (b - xbar) * (ys[b] - ybar);
        sxx += (b - xbar) * (b - xbar);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (int b = 0; b < batches; ++b) {
        const double resid = ys[b] - ybar - slope * (b - xbar);
        rss += resid * resid;
    }
    const double slope_se = std::sqrt(rss / (batches - 2) / sxx);

    const bool flat = std::abs(slope) < 2.0 * slope_se;
    const bool bounded = summary.max_queue_second_half <=
                         static_cast<long>(std::ceil(1.5 * summary.max_queue_first_half));
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "slope %.4f (SE %.4f) per batch, max queue %ld -> %ld, mean system %.2f",
                  slope, slope_se, summary.max_queue_first_half, summary.max_queue_second_half,
                  summary.mean_system_steady);
    report(6, "DTRP stability at rho=0.7", flat && bounded, detail);
}

// --------------------------------------------------------------------------
// C7: heavy-traffic scaled system time sits in the constant band
// --------------------------------------------------------------------------
void criterion7() {
    const auto scenario = sim::load_scenario(scenario_path("dtrp_heavy.ini"));
    dtrp::Fleet fleet =
        dtrp::Fleet::make(scenario.generators, scenario.positions, scenario.speed, scenario.schedule,
                          scenario.speed / scenario.lambda);
    events::PoissonStream stream(scenario.lambda, *scenario.law, scenario.service);
    Rng rng = Rng::substream(scenario.seed, "events");
    const auto metrics = dtrp::run_dtrp(fleet, scenario.workspace,
                                        consensus::CommGraph::complete(scenario.robot_count), stream,
                                        scenario.events, rng);
    const auto summary = dtrp::summarize(metrics);
    // C* = 0.253 * lambda for the uniform unit square (the density integral is 1).
    const double c_star = 0.253 * scenario.lambda;
    const bool in_band =
        summary.scaled_system >= 0.5 * c_star && summary.scaled_system <= 4.0 * c_star;
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "(1-rho)^2 * mean = %.3f, band [%.3f, %.3f], rho %.2f, %ld events",
                  summary.scaled_system, 0.5 * c_star, 4.0 * c_star, summary.rho, summary.completed);
    report(7, "heavy-traffic band (loose factor at finite rho)", in_band, detail);
}

// --------------------------------------------------------------------------
// C8: light-traffic policy: median placement and the travel+service bound
// --------------------------------------------------------------------------
void criterion8() {
    const auto scenario = sim::load_scenario(scenario_path("dtrp_light.ini"));
    const auto result = sim::run(scenario);
    std::istringstream refs(result.find("final_references"));
    double rx = 0, ry = 0;
    refs >> rx >> ry;
    const double mean_sigma = std::stod(result.find("mean_system_steady"));
    const double bound = std::stod(result.find("lower_bound_estimate"));
    const bool median_ok = std::abs(rx - 0.5) <= 0.03 && std::abs(ry - 0.5) <= 0.03;
    const double rel = std::abs(mean_sigma - bound) / bound;
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "reference (%.3f, %.3f), mean system %.4f vs bound %.4f (dev %.1f%%)", rx, ry,
                  mean_sigma, bound, 100 * rel);
    report(8, "light-traffic optimality for one robot", median_ok && rel <= 0.05, detail);
}

// --------------------------------------------------------------------------
// C9: heterogeneous demo: the running ab-cost average decreases
// --------------------------------------------------------------------------
void criterion9() {
    const auto scenario = sim::load_scenario(scenario_path("hetero_types.ini"));
    const auto result = sim::run(scenario);
    const double at100 = std::stod(result.find("ab_cum_avg_at_100"));
    const double at1000 = std::stod(result.find("ab_cum_avg_final"));
    char detail[120];
    std::snprintf(detail, sizeof detail, "ab average cost %.3f after 100 events, %.3f after 1000",
                  at100, at1000);
    report(9, "heterogeneous ab-cost decreases", at1000 < at100, detail);
}

// --------------------------------------------------------------------------
// C10: Markov target tracking concentrates the fleet near angle zero
// --------------------------------------------------------------------------
void criterion10() {
    const auto scenario = sim::load_scenario(scenario_path("markov_track.ini"));
    const auto result = sim::run(scenario);
    const double first100 = std::stod(result.find("first100_cost"));
    const double trailing = std::stod(result.find("trailing_cost"));
    const double angle = std::stod(result.find("mean_angle"));
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "cost %.3f (first 100) -> %.3f (trailing 1000), mean angle %.3f rad", first100,
                  trailing, angle);
    report(10, "Markov tracking cost decrease and concentration", trailing < first100 &&
                                                                      std::abs(angle) <= 0.5,
           detail);
}

// --------------------------------------------------------------------------
// C11: every bundled scenario is byte-for-byte reproducible
// --------------------------------------------------------------------------
void criterion11() {
    const std::vector<std::string> names{
        "two_robot_line.ini",  "coverage_square.ini", "coverage_pentagon.ini",
        "partition_line.ini",  "partition_square10.ini", "hetero_types.ini",
        "markov_track.ini",    "dtrp_stability.ini",  "dtrp_heavy.ini",
        "dtrp_light.ini"};
    int identical = 0;
    std::string first_diff;
    for (const std::string& name : names) {
        const auto scenario = sim::load_scenario(scenario_path(name));
        const auto a = sim::run(scenario);
        const auto b = sim::run(scenario);
        const bool same = a.trace == b.trace && a.summary_text() == b.summary_text() &&
                          a.floodmin_trace == b.floodmin_trace && a.snapshots == b.snapshots;
        if (same)
            ++identical;
        else if (first_diff.empty())
            first_diff = name;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "%d/%zu scenarios byte-identical%s%s", identical,
                  names.size(), first_diff.empty() ? "" : ", first diff: ",
                  first_diff.c_str());
    report(11, "bundled scenarios are deterministic", identical == static_cast<int>(names.size()),
           detail);
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    std::printf("%s: %d criterion(s) failed, total %.1fs\n", failures == 0 ? "OK" : "FAILED",
                failures, elapsed(start));
    return failures == 0 ? 0 : 1;
}
