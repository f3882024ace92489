// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: trial and sweep experiments from a JSON config,
// standalone allocator runs on instance files, and bit-level codec checks.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ccpush/analytic_model.hpp"
#include "ccpush/cache_codec.hpp"
#include "ccpush/harness.hpp"
#include "ccpush/io_util.hpp"
#include "ccpush/run_config.hpp"

namespace {

using namespace ccpush;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& payload) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << payload;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::string> scheme;
    std::optional<std::string> sizes;
    std::optional<std::string> output;
    std::optional<std::string> parameter;
    std::optional<std::string> grid;
};

void add_common_overrides(CLI::App* cmd, std::string& config_path, Overrides& over) {
    cmd->add_option("--config", config_path, "JSON scenario config")->required();
    cmd->add_option("--seed", over.seed, "override the config seed");
    cmd->add_option("--mode", over.mode, "override: td|fd")
        ->check(CLI::IsMember({"td", "fd"}));
    cmd->add_option("--scheme", over.scheme, "override: coded|baseline")
        ->check(CLI::IsMember({"coded", "baseline"}));
    cmd->add_option("--sizes", over.sizes, "override: analytic|bitlevel")
        ->check(CLI::IsMember({"analytic", "bitlevel"}));
    cmd->add_option("--output", over.output, "override the output CSV path");
}

RunConfig load_config(const std::string& path, const Overrides& over) {
    RunConfig config = parse_config(read_file(path));
    if (over.seed) config.trial.seed = *over.seed;
    if (over.mode)
        config.trial.mode = *over.mode == "td" ? Mode::TimeDivision : Mode::FrequencyDivision;
    if (over.scheme)
        config.trial.scheme = *over.scheme == "coded" ? Scheme::Coded : Scheme::Baseline;
    if (over.sizes)
        config.trial.sizes_source =
            *over.sizes == "analytic" ? SizesSource::Analytic : SizesSource::BitLevel;
    if (over.output) config.output_path = *over.output;
    if (over.parameter) {
        config.sweep_parameter = sweep_parameter_from_string(*over.parameter);
        config.sweep_grid.clear();
    }
    if (over.grid) {
        config.sweep_grid.clear();
        std::istringstream fields(*over.grid);
        std::string item;
        while (std::getline(fields, item, ','))
            if (!item.empty()) config.sweep_grid.push_back(std::stod(item));
        if (config.sweep_grid.empty())
            throw std::invalid_argument("--grid: no values parsed");
    }
    config.trial.validate();
    return config;
}

void echo_defaults(const RunConfig& config) {
    if (config.applied_defaults.empty()) return;
    std::cout << "defaults applied:";
    for (const std::string& entry : config.applied_defaults) std::cout << ' ' << entry;
    std::cout << '\n';
}

void emit_rows(const RunConfig& config, const std::vector<SweepRow>& rows) {
    std::ostringstream csv;
    write_sweep_csv(rows, csv);
    if (config.output_path.empty()) {
        std::cout << csv.str();
    } else {
        write_file(config.output_path, csv.str());
        std::cout << "wrote " << rows.size() << " rows to " << config.output_path << '\n';
    }
}

int cmd_trial(const std::string& config_path, const Overrides& over) {
    const RunConfig config = load_config(config_path, over);
    echo_defaults(config);
    if (config.verbosity >= 1) {
        std::cout << "channel scenario of trial 0 (seed " << config.trial.seed << "):\n";
        dump_scenario(draw_trial(config.trial, config.trial.seed).scenario, std::cout);
    }
    const TrialResult result = run_trial(config.trial);

    SweepRow row;
    row.parameter = "none";
    row.value = 0.0;
    row.scheme = config.trial.scheme;
    row.mode = config.trial.mode;
    row.sizes_source = config.trial.sizes_source;
    row.trials = result.trials;
    row.mean_throughput_bps = result.mean_throughput_bps;
    row.stderr_bps = result.stderr_throughput_bps;
    row.mean_total_time_s = result.mean_total_time_s;
    row.traffic_bits = result.mean_traffic_bits;
    row.seed0 = config.trial.seed;

    std::cout << to_string(config.trial.scheme) << '/' << to_string(config.trial.mode)
              << " over " << result.trials
              << " trial(s): throughput " << format_double(result.mean_throughput_bps)
              << " b/s (stderr " << format_double(result.stderr_throughput_bps)
              << "), completion time " << format_double(result.mean_total_time_s)
              << " s, traffic " << format_double(result.mean_traffic_bits) << " bits\n";
    if (!result.all_converged)
        std::cout << "warning: the FD solver reported non-convergence on some trials\n";
    emit_rows(config, {row});
    return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& over) {
    const RunConfig config = load_config(config_path, over);
    echo_defaults(config);
    if (!config.sweep_parameter)
        throw std::invalid_argument("sweep needs sweep.parameter in the config or --parameter");
    if (config.sweep_grid.empty())
        throw std::invalid_argument("sweep needs sweep.grid in the config or --grid");
    const std::vector<SweepRow> rows =
        sweep(config.trial, *config.sweep_parameter, config.sweep_grid);
    int failures = 0;
    for (const SweepRow& row : rows)
        if (row.failed) {
            ++failures;
            std::cerr << "point " << row.parameter << '=' << format_double(row.value) << ' '
                      << to_string(row.scheme) << '/' << to_string(row.mode)
                      << " failed: " << row.error << '\n';
        }
    emit_rows(config, rows);
    if (failures > 0)
        std::cout << failures << " of " << rows.size() << " points failed\n";
    return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& mode, double tol,
              const std::string& output) {
    std::ifstream in(instance_path);
    if (!in) throw std::runtime_error("cannot open '" + instance_path + "'");
    const OptInstance inst = load_instance(in);

    std::ostringstream solution;
    double total_time = 0.0;
    if (mode == "td") {
        const TdAllocation alloc = td_allocate(inst);
        total_time = alloc.total_time_s;
        dump_solution(inst, alloc, solution);
    } else {
        const FdAllocation alloc = fd_allocate(inst, tol);
        total_time = alloc.total_time_s;
        if (!alloc.converged)
            std::cout << "warning: solver did not converge, reporting best feasible\n";
        dump_solution(inst, alloc, solution);
    }
    std::cout << mode << " completion time: " << format_double(total_time) << " s over "
              << inst.count() << " transmissions\n";
    if (output.empty())
        std::cout << solution.str();
    else {
        write_file(output, solution.str());
        std::cout << "wrote solution to " << output << '\n';
    }
    return 0;
}

int cmd_verify(const std::string& config_path, const Overrides& over) {
    const RunConfig config = load_config(config_path, over);
    echo_defaults(config);
    const SystemConfig& cfg = config.trial.system;

    // the same draws a bit-level trial at this seed would see
    const TrialDraws draws = draw_trial(config.trial, config.trial.seed);
    const ContentLibrary library = make_library(cfg, draws.library_seed);
    const PlacementState placement = make_placement(cfg, draws.placement_seed);
    const RequestVector& requests = draws.requests;
    const DeliveryPlan plan = build_delivery_plan(library, placement, requests);

    bool all_ok = true;
    for (int user = 0; user < cfg.num_users; ++user) {
        bool ok = false;
        try {
            ok = decode_user(plan, placement, library, requests, user) ==
                 library.contents[requests.d[user]].bits;
        } catch (const DecodeError& e) {
            std::cout << "user " << user << ": " << e.what() << '\n';
        }
        std::cout << "user " << user << ": " << (ok ? "OK" : "DECODE FAILED")
                  << " (request " << requests.d[user] << ")\n";
        all_ok = all_ok && ok;
    }
    const CodedTraffic analytic = coded_total_traffic(cfg);
    std::cout << "transmitted bits: " << plan.total_bits() << " over "
              << plan.transmissions.size() << " transmissions (analytic "
              << format_double(analytic.bits) << ")\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded cache push simulator"};
    app.require_subcommand(1);

    std::string trial_config, sweep_config, verify_config;
    Overrides trial_over, sweep_over, verify_over;

    CLI::App* trial = app.add_subcommand("trial", "run one experiment cell");
    add_common_overrides(trial, trial_config, trial_over);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep a parameter grid");
    add_common_overrides(sweep_cmd, sweep_config, sweep_over);
    sweep_cmd->add_option("--parameter", sweep_over.parameter,
                          "cache_fraction|power|bandwidth|users");
    sweep_cmd->add_option("--grid", sweep_over.grid, "comma-separated grid values");

    std::string instance_path, solve_mode = "td", solve_output;
    double solve_tol = 1e-6;
    CLI::App* solve = app.add_subcommand("solve", "solve a standalone instance file");
    solve->add_option("--instance", instance_path, "instance CSV")->required();
    solve->add_option("--mode", solve_mode, "td|fd")->check(CLI::IsMember({"td", "fd"}));
    solve->add_option("--tol", solve_tol, "FD bisection tolerance");
    solve->add_option("--output", solve_output, "solution CSV path");

    CLI::App* verify = app.add_subcommand("verify", "bit-level decode check");
    add_common_overrides(verify, verify_config, verify_over);

    CLI11_PARSE(app, argc, argv);

    try {
        if (trial->parsed()) return cmd_trial(trial_config, trial_over);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_over);
        if (solve->parsed())
            return cmd_solve(instance_path, solve_mode, solve_tol, solve_output);
        if (verify->parsed()) return cmd_verify(verify_config, verify_over);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
