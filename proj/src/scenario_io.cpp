#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "adsim/format.hpp"
#include "adsim/simcore.hpp"

namespace adsim::sim {

namespace {

// ---------------------------------------------------------------------------
// Key-value scenario text: [section] headers, key = value lines, comments
// with '#' or ';'. The schema below is the single source of truth for which
// keys exist; anything else is rejected by name.
// ---------------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"run",
         {"algorithm", "seed", "events", "trace_every", "objective_every", "objective_samples",
          "window", "snapshot_every", "raster_resolution", "floodmin_trace"}},
        {"workspace", {"kind", "min", "max", "vertices"}},
        {"events", {"kind", "components", "center", "radius"}},
        {"events_a", {"kind", "components", "center", "radius"}},
        {"events_b", {"kind", "components", "center", "radius"}},
        {"events_ab", {"kind", "components", "center", "radius"}},
        {"robots", {"count", "positions", "budget", "cost", "detection_radius"}},
        {"stepsize", {"kind", "c", "d", "transient_events"}},
        {"graph", {"kind", "radius"}},
        {"partition", {"generators", "rates"}},
        {"dtrp", {"lambda", "speed", "service", "service_mean"}},
        {"hetero",
         {"count_a", "count_b", "cost_a", "cost_b", "type_probs", "positions_a", "positions_b"}},
        {"markov", {"radius", "decay", "noise", "theta0", "center"}},
    };
    return s;
}

struct KeyValues {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const {
        auto sit = sections.find(section);
        return sit != sections.end() && sit->second.count(key) > 0;
    }
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback = "") const {
        auto sit = sections.find(section);
        if (sit == sections.end()) return fallback;
        auto kit = sit->second.find(key);
        return kit == sit->second.end() ? fallback : kit->second;
    }
    void set(const std::string& section, const std::string& key, const std::string& value) {
        sections[section][key] = value;
    }
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ScenarioError("(line " + std::to_string(lineno) + ")", "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (schema().count(section) == 0) throw ScenarioError(section, "unknown section");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("(line " + std::to_string(lineno) + ")", "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ScenarioError(key, "key appears before any [section]");
        const auto& allowed = schema().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ScenarioError(section + "." + key, "unknown key");
        kv.set(section, key, value);
    }
    return kv;
}

// ---------------------------------------------------------------------------
// Typed readers with field-named errors.
// ---------------------------------------------------------------------------

double read_double(const KeyValues& kv, const std::string& section, const std::string& key,
                   double fallback) {
    const std::string raw = kv.get(section, key);
    if (raw.empty()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (trim(raw.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ScenarioError(section + "." + key, "expected a number, got '" + raw + "'");
}

long read_long(const KeyValues& kv, const std::string& section, const std::string& key, long fallback) {
    const double v = read_double(kv, section, key, static_cast<double>(fallback));
    const long l = static_cast<long>(v);
    if (static_cast<double>(l) != v)
        throw ScenarioError(section + "." + key, "expected an integer");
    return l;
}

bool read_bool(const KeyValues& kv, const std::string& section, const std::string& key, bool fallback) {
    const std::string raw = kv.get(section, key);
    if (raw.empty()) return fallback;
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    throw ScenarioError(section + "." + key, "expected true/false");
}

std::vector<double> read_doubles(const KeyValues& kv, const std::string& section,
                                 const std::string& key) {
    std::vector<double> out;
    std::istringstream in(kv.get(section, key));
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument("");
        } catch (...) {
            throw ScenarioError(section + "." + key, "expected numbers, got '" + tok + "'");
        }
    }
    return out;
}

std::vector<Vec> read_points(const KeyValues& kv, const std::string& section, const std::string& key,
                             int dim) {
    const std::vector<double> flat = read_doubles(kv, section, key);
    if (flat.size() % static_cast<std::size_t>(dim) != 0)
        throw ScenarioError(section + "." + key,
                            "expected coordinates in groups of " + std::to_string(dim));
    std::vector<Vec> out;
    for (std::size_t i = 0; i < flat.size(); i += dim) {
        Vec v = Vec::zero(dim);
        for (int c = 0; c < dim; ++c) v[c] = flat[i + c];
        out.push_back(v);
    }
    return out;
}

CostSpec read_cost(const KeyValues& kv, const std::string& section, const std::string& key,
                   CostSpec fallback) {
    const std::string raw = kv.get(section, key);
    if (raw.empty()) return fallback;
    std::istringstream in(raw);
    std::string kind;
    in >> kind;
    try {
        if (kind == "quadratic") return CostSpec::quadratic();
        if (kind == "linear") {
            double v = 1.0;
            in >> v;
            return CostSpec::linear(v);
        }
        if (kind == "power") {
            double a = 2.0;
            in >> a;
            return CostSpec::power(a);
        }
    } catch (const std::exception& e) {
        throw ScenarioError(section + "." + key, e.what());
    }
    throw ScenarioError(section + "." + key, "expected quadratic | linear <v> | power <alpha>");
}

Workspace read_workspace(const KeyValues& kv) {
    const std::string kind = kv.get("workspace", "kind", "box");
    try {
        if (kind == "interval") {
            return Workspace::interval(read_double(kv, "workspace", "min", 0.0),
                                       read_double(kv, "workspace", "max", 1.0));
        }
        if (kind == "box") {
            std::vector<double> lo = read_doubles(kv, "workspace", "min");
            std::vector<double> hi = read_doubles(kv, "workspace", "max");
            if (lo.empty()) lo = {0.0, 0.0};
            if (hi.empty()) hi = {1.0, 1.0};
            if (lo.size() != hi.size() || lo.empty() || lo.size() > 3)
                throw ScenarioError("workspace.min", "min/max must share dimension 1..3");
            Vec vlo = Vec::zero(static_cast<int>(lo.size()));
            Vec vhi = vlo;
            for (std::size_t i = 0; i < lo.size(); ++i) {
                vlo[static_cast<int>(i)] = lo[i];
                vhi[static_cast<int>(i)] = hi[i];
            }
            return Workspace::box(vlo, vhi);
        }
        if (kind == "polygon") {
            return Workspace::polygon(read_points(kv, "workspace", "vertices", 2));
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError("workspace", e.what());
    }
    throw ScenarioError("workspace.kind", "expected interval | box | polygon");
}

events::SpatialDistribution read_distribution(const KeyValues& kv, const std::string& section,
                                              const Workspace& ws) {
    const std::string kind = kv.get(section, "kind", "uniform");
    try {
        if (kind == "uniform") return events::SpatialDistribution::uniform(ws);
        if (kind == "ring") {
            Vec center = Vec::zero(ws.dim());
            const std::vector<Vec> c = read_points(kv, section, "center", ws.dim());
            if (c.size() > 1) throw ScenarioError(section + ".center", "expected one point");
            if (c.size() == 1) center = c[0];
            return events::SpatialDistribution::ring(ws, center,
                                                     read_double(kv, section, "radius", 1.0));
        }
        if (kind == "gaussian_mixture") {
            // components: weight mean... sigma; groups of dim+2 numbers
            const std::vector<double> flat = read_doubles(kv, section, "components");
            const std::size_t group = static_cast<std::size_t>(ws.dim()) + 2;
            if (flat.empty() || flat.size() % group != 0)
                throw ScenarioError(section + ".components",
                                    "expected groups of " + std::to_string(group) +
                                        " numbers: weight mean... sigma");
            std::vector<events::SpatialDistribution::MixtureComponent> comps;
            for (std::size_t i = 0; i < flat.size(); i += group) {
                events::SpatialDistribution::MixtureComponent c;
                c.weight = flat[i];
                c.mean = Vec::zero(ws.dim());
                for (int d = 0; d < ws.dim(); ++d) c.mean[d] = flat[i + 1 + d];
                c.sigma = flat[i + group - 1];
                comps.push_back(c);
            }
            return events::SpatialDistribution::gaussian_mixture(ws, std::move(comps));
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(section, e.what());
    }
    throw ScenarioError(section + ".kind", "expected uniform | gaussian_mixture | ring");
}

std::vector<Vec> seeded_positions(int count, const Workspace& ws, std::uint64_t seed,
                                  std::string_view label) {
    const events::SpatialDistribution uniform = events::SpatialDistribution::uniform(ws);
    Rng rng = Rng::substream(seed, label);
    std::vector<Vec> out;
    while (static_cast<int>(out.size()) < count) {
        Vec candidate = uniform.sample(rng);
        bool duplicate = false;
        for (const Vec& p : out) duplicate = duplicate || p == candidate;
        if (!duplicate) out.push_back(candidate);
    }
    return out;
}

Algorithm read_algorithm(const KeyValues& kv) {
    const std::string name = kv.get("run", "algorithm", "coverage");
    if (name == "coverage") return Algorithm::Coverage;
    if (name == "hetero") return Algorithm::Hetero;
    if (name == "track") return Algorithm::Track;
    if (name == "partition") return Algorithm::Partition;
    if (name == "dtrp") return Algorithm::Dtrp;
    if (name == "dtrp_light") return Algorithm::DtrpLight;
    throw ScenarioError("run.algorithm",
                        "expected coverage | hetero | track | partition | dtrp | dtrp_light");
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Coverage: return "coverage";
        case Algorithm::Hetero: return "hetero";
        case Algorithm::Track: return "track";
        case Algorithm::Partition: return "partition";
        case Algorithm::Dtrp: return "dtrp";
        case Algorithm::DtrpLight: return "dtrp_light";
    }
    return "?";
}

Scenario parse_scenario(const std::string& text, std::span<const std::string> overrides,
                        std::optional<std::uint64_t> seed_override) {
    KeyValues kv = parse_key_values(text);
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        const std::size_t dot = ov.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq)
            throw ScenarioError(ov, "override must look like section.key=value");
        const std::string section = trim(ov.substr(0, dot));
        const std::string key = trim(ov.substr(dot + 1, eq - dot - 1));
        if (schema().count(section) == 0) throw ScenarioError(section, "unknown section");
        const auto& allowed = schema().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ScenarioError(section + "." + key, "unknown key");
        kv.set(section, key, trim(ov.substr(eq + 1)));
    }
    if (seed_override) kv.set("run", "seed", std::to_string(*seed_override));

    Scenario s;
    s.algorithm = read_algorithm(kv);
    const double seed_raw = read_double(kv, "run", "seed", 1.0);
    if (!(seed_raw >= 0)) throw ScenarioError("run.seed", "must be nonnegative");
    s.seed = static_cast<std::uint64_t>(seed_raw);
    s.events = read_long(kv, "run", "events", 1000);
    if (s.events < 0) throw ScenarioError("run.events", "must be nonnegative");
    s.trace_every = read_long(kv, "run", "trace_every", 1);
    if (s.trace_every < 1) throw ScenarioError("run.trace_every", "must be >= 1");
    s.objective_every = read_long(kv, "run", "objective_every", 0);
    s.objective_samples = read_long(kv, "run", "objective_samples", 100000);
    s.window = read_long(kv, "run", "window", 1000);
    if (s.window < 1) throw ScenarioError("run.window", "must be >= 1");
    s.snapshot_every = read_long(kv, "run", "snapshot_every", 0);
    if (s.snapshot_every < 0) throw ScenarioError("run.snapshot_every", "must be >= 0");
    s.raster_resolution = static_cast<int>(read_long(kv, "run", "raster_resolution", 128));
    if (s.raster_resolution < 2) throw ScenarioError("run.raster_resolution", "must be >= 2");
    s.floodmin_trace = read_bool(kv, "run", "floodmin_trace", false);

    s.workspace = read_workspace(kv);
    const int dim = s.workspace.dim();

    // stepsize
    {
        const std::string kind = kv.get("stepsize", "kind", "harmonic");
        const double c = read_double(kv, "stepsize", "c", 1.0);
        const double d = read_double(kv, "stepsize", "d", 0.01);
        try {
            if (kind == "harmonic")
                s.schedule = coverage::StepsizeSchedule::harmonic(c, d);
            else if (kind == "constant")
                s.schedule = coverage::StepsizeSchedule::constant(c);
            else
                throw ScenarioError("stepsize.kind", "expected harmonic | constant");
        } catch (const ScenarioError&) {
            throw;
        } catch (const std::exception& e) {
            throw ScenarioError("stepsize", e.what());
        }
        s.transient_events = read_long(kv, "stepsize", "transient_events", 0);
        if (s.transient_events < 0) throw ScenarioError("stepsize.transient_events", "must be >= 0");
    }

    // graph
    {
        const std::string kind = kv.get("graph", "kind", "complete");
        if (kind == "complete")
            s.graph_complete = true;
        else if (kind == "rdisk") {
            s.graph_complete = false;
            s.graph_radius = read_double(kv, "graph", "radius", 0.0);
            if (!(s.graph_radius > 0.0)) throw ScenarioError("graph.radius", "must be positive");
        } else {
            throw ScenarioError("graph.kind", "expected complete | rdisk");
        }
    }

    // robots
    s.robot_count = static_cast<int>(read_long(kv, "robots", "count", 1));
    if (s.robot_count < 1) throw ScenarioError("robots.count", "must be >= 1");
    s.budget = read_double(kv, "robots", "budget", 1.0);
    if (!(s.budget > 0.0)) throw ScenarioError("robots.budget", "must be positive");
    s.cost = read_cost(kv, "robots", "cost", CostSpec::quadratic());
    s.detection_radius =
        read_double(kv, "robots", "detection_radius", std::numeric_limits<double>::infinity());
    if (!(s.detection_radius > 0.0)) throw ScenarioError("robots.detection_radius", "must be positive");

    const bool needs_law = s.algorithm == Algorithm::Coverage || s.algorithm == Algorithm::Partition ||
                           s.algorithm == Algorithm::Dtrp || s.algorithm == Algorithm::DtrpLight;
    if (needs_law) s.law = read_distribution(kv, "events", s.workspace);

    // positions: explicit or seeded
    s.positions = read_points(kv, "robots", "positions", dim);
    if (s.positions.empty()) {
        s.positions = seeded_positions(s.robot_count, s.workspace, s.seed, "init-positions");
    } else if (static_cast<int>(s.positions.size()) != s.robot_count) {
        throw ScenarioError("robots.positions",
                            "expected " + std::to_string(s.robot_count) + " points, got " +
                                std::to_string(s.positions.size()));
    }
    for (const Vec& p : s.positions)
        if (!s.workspace.contains(p)) throw ScenarioError("robots.positions", "must lie inside Q");

    if (s.algorithm == Algorithm::Partition || s.algorithm == Algorithm::Dtrp) {
        s.generators = read_points(kv, "partition", "generators", dim);
        if (s.generators.empty())
            s.generators = partition::default_generators(s.robot_count, s.workspace);
        if (static_cast<int>(s.generators.size()) != s.robot_count)
            throw ScenarioError("partition.generators",
                                "expected " + std::to_string(s.robot_count) + " points");
        for (const Vec& g : s.generators)
            if (!s.workspace.contains(g)) throw ScenarioError("partition.generators", "must lie inside Q");
    }
    if (s.algorithm == Algorithm::Partition) {
        s.rates = read_doubles(kv, "partition", "rates");
        if (s.rates.empty())
            s.rates.assign(s.robot_count, 1.0 / static_cast<double>(s.robot_count));
        if (static_cast<int>(s.rates.size()) != s.robot_count)
            throw ScenarioError("partition.rates",
                                "expected " + std::to_string(s.robot_count) + " rates");
        double total = 0.0;
        for (double a : s.rates) {
            if (!(a > 0.0)) throw ScenarioError("partition.rates", "rates must be positive");
            total += a;
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw ScenarioError("partition.rates", "rates must sum to 1, got " + fmt(total));
    }

    if (s.algorithm == Algorithm::Dtrp || s.algorithm == Algorithm::DtrpLight) {
        s.lambda = read_double(kv, "dtrp", "lambda", 1.0);
        if (!(s.lambda > 0.0)) throw ScenarioError("dtrp.lambda", "must be positive");
        s.speed = read_double(kv, "dtrp", "speed", 1.0);
        if (!(s.speed > 0.0)) throw ScenarioError("dtrp.speed", "must be positive");
        const std::string service = kv.get("dtrp", "service", "deterministic");
        if (service == "deterministic")
            s.service.kind = events::ServiceLaw::Kind::Deterministic;
        else if (service == "exponential")
            s.service.kind = events::ServiceLaw::Kind::Exponential;
        else
            throw ScenarioError("dtrp.service", "expected deterministic | exponential");
        s.service.mean = read_double(kv, "dtrp", "service_mean", 0.1);
        if (!(s.service.mean >= 0.0)) throw ScenarioError("dtrp.service_mean", "must be nonnegative");
        if (s.events < 1) throw ScenarioError("run.events", "dtrp runs need at least one completion");
    }

    if (s.algorithm == Algorithm::Hetero) {
        s.count_a = static_cast<int>(read_long(kv, "hetero", "count_a", 1));
        s.count_b = static_cast<int>(read_long(kv, "hetero", "count_b", 1));
        if (s.count_a < 1) throw ScenarioError("hetero.count_a", "must be >= 1");
        if (s.count_b < 1) throw ScenarioError("hetero.count_b", "must be >= 1");
        s.cost_a = read_cost(kv, "hetero", "cost_a", CostSpec::linear(1.0));
        s.cost_b = read_cost(kv, "hetero", "cost_b", CostSpec::linear(1.0));
        const std::vector<double> probs = read_doubles(kv, "hetero", "type_probs");
        if (!probs.empty()) {
            if (probs.size() != 3)
                throw ScenarioError("hetero.type_probs", "expected three probabilities");
            s.type_probs = {probs[0], probs[1], probs[2]};
        }
        const double total = s.type_probs[0] + s.type_probs[1] + s.type_probs[2];
        if (std::abs(total - 1.0) > 1e-9)
            throw ScenarioError("hetero.type_probs", "must sum to 1, got " + fmt(total));
        s.positions_a = read_points(kv, "hetero", "positions_a", dim);
        s.positions_b = read_points(kv, "hetero", "positions_b", dim);
        if (s.positions_a.empty())
            s.positions_a = seeded_positions(s.count_a, s.workspace, s.seed, "init-positions-a");
        if (s.positions_b.empty())
            s.positions_b = seeded_positions(s.count_b, s.workspace, s.seed, "init-positions-b");
        if (static_cast<int>(s.positions_a.size()) != s.count_a)
            throw ScenarioError("hetero.positions_a", "expected " + std::to_string(s.count_a) + " points");
        if (static_cast<int>(s.positions_b.size()) != s.count_b)
            throw ScenarioError("hetero.positions_b", "expected " + std::to_string(s.count_b) + " points");
        s.law_a = read_distribution(kv, "events_a", s.workspace);
        s.law_b = read_distribution(kv, "events_b", s.workspace);
        s.law_ab = read_distribution(kv, "events_ab", s.workspace);
    }

    if (s.algorithm == Algorithm::Track) {
        if (dim != 2) throw ScenarioError("workspace.kind", "track scenarios need a 2-D workspace");
        s.target.radius = read_double(kv, "markov", "radius", 1.0);
        s.target.decay = read_double(kv, "markov", "decay", 0.95);
        s.target.noise_half_width = read_double(kv, "markov", "noise", 0.5);
        s.target.theta = read_double(kv, "markov", "theta0", 0.0);
        const std::vector<Vec> c = read_points(kv, "markov", "center", 2);
        if (c.size() > 1) throw ScenarioError("markov.center", "expected one point");
        s.target.center = c.empty() ? Vec(0.0, 0.0) : c[0];
        if (!(s.target.radius > 0.0)) throw ScenarioError("markov.radius", "must be positive");
        for (int i = 0; i < 360; ++i) {
            const double a = 2.0 * M_PI * i / 360.0;
            const Vec p(s.target.center[0] + s.target.radius * std::cos(a),
                        s.target.center[1] + s.target.radius * std::sin(a));
            if (!s.workspace.contains(p))
                throw ScenarioError("markov.radius", "target circle must lie inside Q");
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path, std::span<const std::string> overrides,
                       std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), overrides, seed_override);
}

namespace {

std::string describe_distribution(const std::string& section, const events::SpatialDistribution& law) {
    std::string out = "[" + section + "]\n";
    switch (law.kind()) {
        case events::SpatialDistribution::Kind::Uniform: out += "kind = uniform\n"; break;
        case events::SpatialDistribution::Kind::GaussianMixture: {
            out += "kind = gaussian_mixture\ncomponents =";
            for (const auto& comp : law.components())
                out += " " + fmt(comp.weight) + " " + fmt(comp.mean) + " " + fmt(comp.sigma);
            out += "\n";
            break;
        }
        case events::SpatialDistribution::Kind::Ring:
            out += "kind = ring\ncenter = " + fmt(law.ring_center()) +
                   "\nradius = " + fmt(law.ring_radius()) + "\n";
            break;
    }
    return out;
}

std::string points_line(const std::vector<Vec>& pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out.push_back(' ');
        out += fmt(pts[i]);
    }
    return out;
}

}  // namespace

std::string describe(const Scenario& s) {
    std::string out;
    out += "[run]\n";
    out += "algorithm = " + algorithm_name(s.algorithm) + "\n";
    out += "seed = " + std::to_string(s.seed) + "\n";
    out += "events = " + fmt(s.events) + "\n";
    out += "trace_every = " + fmt(s.trace_every) + "\n";
    out += "objective_every = " + fmt(s.objective_every) + "\n";
    out += "objective_samples = " + fmt(s.objective_samples) + "\n";
    out += "window = " + fmt(s.window) + "\n";
    out += "snapshot_every = " + fmt(s.snapshot_every) + "\n";
    out += "raster_resolution = " + std::to_string(s.raster_resolution) + "\n";
    out += "floodmin_trace = " + std::string(s.floodmin_trace ? "true" : "false") + "\n";

    out += "[workspace]\n";
    switch (s.workspace.kind()) {
        case Workspace::Kind::Interval:
            out += "kind = interval\nmin = " + fmt(s.workspace.bounds_lo()[0]) +
                   "\nmax = " + fmt(s.workspace.bounds_hi()[0]) + "\n";
            break;
        case Workspace::Kind::Box:
            out += "kind = box\nmin = " + fmt(s.workspace.bounds_lo()) +
                   "\nmax = " + fmt(s.workspace.bounds_hi()) + "\n";
            break;
        case Workspace::Kind::Polygon:
            out += "kind = polygon\nvertices = " + points_line(s.workspace.vertices()) + "\n";
            break;
    }

    if (s.law) out += describe_distribution("events", *s.law);

    out += "[robots]\n";
    out += "count = " + std::to_string(s.robot_count) + "\n";
    out += "positions = " + points_line(s.positions) + "\n";
    out += "budget = " + fmt(s.budget) + "\n";
    out += "cost = " + s.cost.describe() + "\n";
    if (std::isfinite(s.detection_radius)) out += "detection_radius = " + fmt(s.detection_radius) + "\n";

    out += "[stepsize]\n";
    out += std::string("kind = ") +
           (s.schedule.kind == coverage::StepsizeSchedule::Kind::Harmonic ? "harmonic" : "constant") +
           "\n";
    out += "c = " + fmt(s.schedule.c) + "\n";
    out += "d = " + fmt(s.schedule.d) + "\n";
    out += "transient_events = " + fmt(s.transient_events) + "\n";

    out += "[graph]\n";
    if (s.graph_complete)
        out += "kind = complete\n";
    else
        out += "kind = rdisk\nradius = " + fmt(s.graph_radius) + "\n";

    if (s.algorithm == Algorithm::Partition || s.algorithm == Algorithm::Dtrp) {
        out += "[partition]\n";
        out += "generators = " + points_line(s.generators) + "\n";
        if (s.algorithm == Algorithm::Partition)
            out += "rates = " + fmt(std::span<const double>(s.rates)) + "\n";
    }
    if (s.algorithm == Algorithm::Dtrp || s.algorithm == Algorithm::DtrpLight) {
        out += "[dtrp]\n";
        out += "lambda = " + fmt(s.lambda) + "\n";
        out += "speed = " + fmt(s.speed) + "\n";
        out += std::string("service = ") +
               (s.service.kind == events::ServiceLaw::Kind::Deterministic ? "deterministic"
                                                                          : "exponential") +
               "\n";
        out += "service_mean = " + fmt(s.service.mean) + "\n";
    }
    if (s.algorithm == Algorithm::Hetero) {
        out += "[hetero]\n";
        out += "count_a = " + std::to_string(s.count_a) + "\n";
        out += "count_b = " + std::to_string(s.count_b) + "\n";
        out += "cost_a = " + s.cost_a.describe() + "\n";
        out += "cost_b = " + s.cost_b.describe() + "\n";
        out += "type_probs = " + fmt(s.type_probs[0]) + " " + fmt(s.type_probs[1]) + " " +
               fmt(s.type_probs[2]) + "\n";
        out += "positions_a = " + points_line(s.positions_a) + "\n";
        out += "positions_b = " + points_line(s.positions_b) + "\n";
        out += describe_distribution("events_a", *s.law_a);
        out += describe_distribution("events_b", *s.law_b);
        out += describe_distribution("events_ab", *s.law_ab);
    }
    if (s.algorithm == Algorithm::Track) {
        out += "[markov]\n";
        out += "radius = " + fmt(s.target.radius) + "\n";
        out += "decay = " + fmt(s.target.decay) + "\n";
        out += "noise = " + fmt(s.target.noise_half_width) + "\n";
        out += "theta0 = " + fmt(s.target.theta) + "\n";
        out += "center = " + fmt(s.target.center) + "\n";
    }
    return out;
}

}  // namespace adsim::sim
