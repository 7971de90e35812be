#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adsim/coverage.hpp"
#include "adsim/events.hpp"
#include "adsim/partition.hpp"
#include "adsim/vec.hpp"
#include "adsim/workspace.hpp"

namespace adsim::sim {

enum class Algorithm { Coverage, Hetero, Track, Partition, Dtrp, DtrpLight };

std::string algorithm_name(Algorithm a);

// Scenario validation failures carry the offending dotted field name so the
// CLI can point at the exact key.
class ScenarioError : public std::invalid_argument {
  public:
    ScenarioError(std::string field, const std::string& message)
        : std::invalid_argument("scenario field '" + field + "': " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

// A fully resolved run description. Everything derivable (default generators,
// seeded initial positions) is materialized at build time, so describe()
// output is complete and every artifact carrying it is self-describing.
struct Scenario {
    Algorithm algorithm = Algorithm::Coverage;
    std::uint64_t seed = 1;
    long events = 1000;
    long trace_every = 1;
    long objective_every = 0;
    long objective_samples = 100000;
    long window = 1000;
    long snapshot_every = 0;
    int raster_resolution = 128;
    bool floodmin_trace = false;

    Workspace workspace = Workspace::unit_square();
    std::optional<events::SpatialDistribution> law;  // coverage / partition / dtrp event locations

    // robots (coverage family)
    int robot_count = 1;
    std::vector<Vec> positions;
    double budget = 1.0;
    CostSpec cost = CostSpec::quadratic();
    coverage::StepsizeSchedule schedule = coverage::StepsizeSchedule::harmonic(1.0, 1.0);
    long transient_events = 0;
    double detection_radius = std::numeric_limits<double>::infinity();

    // communication graph
    bool graph_complete = true;
    double graph_radius = 0.0;

    // partition / dtrp
    std::vector<Vec> generators;
    std::vector<double> rates;

    // dtrp
    double lambda = 1.0;
    events::ServiceLaw service{};
    double speed = 1.0;

    // hetero
    int count_a = 1;
    int count_b = 1;
    std::vector<Vec> positions_a, positions_b;
    CostSpec cost_a = CostSpec::linear(1.0);
    CostSpec cost_b = CostSpec::linear(1.0);
    std::array<double, 3> type_probs{0.3, 0.3, 0.4};
    std::optional<events::SpatialDistribution> law_a, law_b, law_ab;

    // markov target
    events::MarkovTarget target;
};

// Parse the key-value scenario format (see README for the schema). Unknown
// sections or keys are rejected. Overrides are dotted section.key=value
// strings applied before resolution.
Scenario parse_scenario(const std::string& text, std::span<const std::string> overrides = {},
                        std::optional<std::uint64_t> seed_override = {});
Scenario load_scenario(const std::string& path, std::span<const std::string> overrides = {},
                       std::optional<std::uint64_t> seed_override = {});

// Canonical key-value form of the resolved scenario; re-parseable.
std::string describe(const Scenario& s);

struct RunResult {
    std::string trace;  // CSV with header row
    std::vector<std::pair<std::string, std::string>> summary;
    std::string floodmin_trace;  // nonempty only when requested
    // (file stem, content) pairs: ownership rasters and positions dumps.
    std::vector<std::pair<std::string, std::string>> snapshots;

    std::string summary_text() const;
    std::string find(const std::string& key) const;  // empty when missing
};

RunResult run(const Scenario& s);

// Mean and least-squares slope over the final `window` samples; a window of
// one sample has slope zero by convention.
struct WindowStats {
    double mean = 0.0;
    double slope = 0.0;
};
WindowStats trailing_window_stats(std::span<const double> series, long window);

}  // namespace adsim::sim
