// Command-line front end: validate and run scenario files, sweep parameter
// grids, and dump ownership-raster snapshots. Exit codes: 0 success,
// 2 scenario validation failure, 1 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adsim/format.hpp"
#include "adsim/simcore.hpp"

namespace fs = std::filesystem;
using adsim::sim::RunResult;
using adsim::sim::Scenario;

namespace {

// Every artifact carries the resolved scenario as a '#' header block, so a
// trace alone identifies the run that produced it.
std::string header_block(const Scenario& s) {
    std::string out;
    std::istringstream in(adsim::sim::describe(s));
    std::string line;
    while (std::getline(in, line)) out += "# " + line + "\n";
    return out;
}

void write_file(const fs::path& path, const std::string& header, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << body;
}

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    bool floodmin_trace = false;
};

Scenario load(const CommonOpts& opts) {
    Scenario s = adsim::sim::load_scenario(opts.scenario_path, opts.overrides, opts.seed);
    if (opts.floodmin_trace) s.floodmin_trace = true;
    return s;
}

int cmd_run(const CommonOpts& opts) {
    const Scenario s = load(opts);
    if ((s.algorithm == adsim::sim::Algorithm::Dtrp ||
         s.algorithm == adsim::sim::Algorithm::DtrpLight) &&
        s.lambda * s.service.mean / s.robot_count >= 1.0)
        std::cerr << "warning: load factor rho >= 1, the system is not stabilizable\n";
    const RunResult result = adsim::sim::run(s);
    fs::create_directories(opts.out_dir);
    const std::string header = header_block(s);
    write_file(fs::path(opts.out_dir) / "trace.csv", header, result.trace);
    write_file(fs::path(opts.out_dir) / "summary.txt", header, result.summary_text());
    if (!result.floodmin_trace.empty())
        write_file(fs::path(opts.out_dir) / "floodmin.csv", header, result.floodmin_trace);
    for (const auto& [stem, content] : result.snapshots)
        write_file(fs::path(opts.out_dir) / stem, header, content);
    std::cout << result.summary_text();
    return 0;
}

int cmd_validate(const CommonOpts& opts) {
    load(opts);
    std::cout << "ok\n";
    return 0;
}

int cmd_snapshot(const CommonOpts& opts, long at) {
    Scenario s = load(opts);
    if (at < 0) throw std::runtime_error("snapshot: --at must be nonnegative");
    s.events = at;
    s.snapshot_every = at > 0 ? at : 1;
    s.trace_every = std::max<long>(1, at);
    const RunResult result = adsim::sim::run(s);
    fs::create_directories(opts.out_dir);
    const std::string header = header_block(s);
    if (result.snapshots.empty())
        throw std::runtime_error("snapshot: scenario produced no raster (1-D workspace?)");
    for (const auto& [stem, content] : result.snapshots)
        write_file(fs::path(opts.out_dir) / stem, header, content);
    std::cout << "wrote " << result.snapshots.size() << " snapshot files to " << opts.out_dir << "\n";
    return 0;
}

struct GridAxis {
    std::string key;
    std::vector<std::string> values;
};

GridAxis parse_grid(const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos) throw std::runtime_error("grid spec must look like section.key=v1,v2");
    GridAxis axis;
    axis.key = spec.substr(0, eq);
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const std::size_t comma = rest.find(',', pos);
        const std::string tok =
            comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos);
        if (!tok.empty()) axis.values.push_back(tok);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (axis.values.empty()) throw std::runtime_error("grid axis '" + axis.key + "' has no values");
    return axis;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<std::string>& grid_specs) {
    if (grid_specs.empty()) throw std::runtime_error("sweep needs at least one --grid axis");
    if (grid_specs.size() > 2) throw std::runtime_error("sweep supports at most two --grid axes");
    std::vector<GridAxis> axes;
    for (const std::string& spec : grid_specs) axes.push_back(parse_grid(spec));

    std::vector<std::vector<std::string>> points;  // per point: one value per axis
    if (axes.size() == 1) {
        for (const auto& v : axes[0].values) points.push_back({v});
    } else {
        for (const auto& v0 : axes[0].values)
            for (const auto& v1 : axes[1].values) points.push_back({v0, v1});
    }

    std::vector<std::string> columns;  // summary keys, in first-seen order
    std::vector<std::pair<std::vector<std::string>, RunResult>> rows;
    std::vector<std::string> errors(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        CommonOpts point_opts = opts;
        for (std::size_t a = 0; a < axes.size(); ++a)
            point_opts.overrides.push_back(axes[a].key + "=" + points[p][a]);
        // Points share the scenario seed (common random numbers across the
        // grid); every run still derives its own substreams internally.
        try {
            const Scenario s = load(point_opts);
            RunResult result = adsim::sim::run(s);
            for (const auto& [key, value] : result.summary) {
                (void)value;
                if (std::find(columns.begin(), columns.end(), key) == columns.end())
                    columns.push_back(key);
            }
            rows.emplace_back(points[p], std::move(result));
        } catch (const std::exception& e) {
            errors[p] = e.what();
            rows.emplace_back(points[p], RunResult{});
        }
    }

    std::string table;
    for (const auto& axis : axes) table += axis.key + ",";
    table += "status";
    for (const auto& col : columns) table += "," + col;
    table += "\n";
    for (std::size_t p = 0; p < rows.size(); ++p) {
        for (const auto& v : rows[p].first) table += v + ",";
        if (errors[p].empty()) {
            table += "ok";
            for (const auto& col : columns) {
                std::string cell = rows[p].second.find(col);
                std::replace(cell.begin(), cell.end(), ',', ';');
                table += "," + cell;
            }
        } else {
            std::string msg = errors[p];
            std::replace(msg.begin(), msg.end(), ',', ';');
            table += "error: " + msg;
        }
        table += "\n";
    }
    fs::create_directories(opts.out_dir);
    const Scenario base = adsim::sim::load_scenario(opts.scenario_path, opts.overrides, opts.seed);
    write_file(fs::path(opts.out_dir) / "sweep.csv", header_block(base), table);
    std::cout << table;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive deployment simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    long snapshot_at = 0;
    std::vector<std::string> grid_specs;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("scenario", opts.scenario_path, "scenario file")->required();
        cmd->add_option("--set", opts.overrides, "override: section.key=value");
        cmd->add_option("--seed", opts.seed, "seed override");
        if (with_out) cmd->add_option("--out", opts.out_dir, "output directory");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario, write trace and summary");
    add_common(run_cmd, true);
    run_cmd->add_flag("--floodmin-trace", opts.floodmin_trace, "dump per-round consensus values");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a grid of scenario variants");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--grid", grid_specs, "grid axis: section.key=v1,v2,...")->required();

    CLI::App* snapshot_cmd = app.add_subcommand("snapshot", "write an ownership raster at event k");
    add_common(snapshot_cmd, true);
    snapshot_cmd->add_option("--at", snapshot_at, "event index")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario file");
    add_common(validate_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(opts);
        if (sweep_cmd->parsed()) return cmd_sweep(opts, grid_specs);
        if (snapshot_cmd->parsed()) return cmd_snapshot(opts, snapshot_at);
        if (validate_cmd->parsed()) return cmd_validate(opts);
    } catch (const adsim::sim::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
