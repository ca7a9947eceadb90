// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes: 0 success, 2 configuration or usage
// error, 1 any other failure. Results go to --out DIR when given, stdout
// otherwise; progress and diagnostics go to stderr.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nanoscout/nanoscout.hpp"

namespace fs = std::filesystem;
using namespace nanoscout;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::vector<std::string> overrides;
    bool events = false;
    bool quiet = false;
    bool verbose = false;
    std::string figure;
};

Settings load(const Options& o) {
    Settings s = o.config.empty() ? Settings{} : load_settings(o.config);
    for (const auto& kv : o.overrides) apply_override(s, kv);
    if (o.seed) s.master_seed = *o.seed;
    return s;
}

Progress progress_for(const Options& o) {
    if (o.quiet) return {};
    return [](std::string_view line) { std::cerr << "  " << line << '\n'; };
}

/// Output stream for `name`: a file in --out, or stdout.
class Sink {
public:
    Sink(const Options& o, const std::string& name) {
        if (o.out.empty()) return;
        fs::create_directories(o.out);
        path_ = (fs::path(o.out) / name).string();
        file_.open(path_, std::ios::binary);
        if (!file_) throw std::runtime_error(path_ + ": cannot open for writing");
    }
    std::ostream& stream() { return path_.empty() ? std::cout : file_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream file_;
};

void write_summary(const Options& o, const std::string& command, const Settings& s, double seconds,
                   std::size_t rows) {
    if (o.out.empty()) return;
    std::ofstream out(fs::path(o.out) / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("summary.json: cannot open for writing");
    out << summary_json({command, s, seconds, rows}).dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const Options& o) {
    const Settings s = load(o);
    const TrialConfig config = make_trial_config(s);
    if (o.events && o.out.empty()) throw ConfigError("--events: needs --out DIR for the event log");
    const auto start = std::chrono::steady_clock::now();
    const BatchResult batch = run_batch_detailed(config, s.trials, s.master_seed, o.threads, o.events, o.events);
    const double seconds = seconds_since(start);
    const BatchEstimate& e = batch.estimate;

    std::cout << "vessel " << to_string(s.vessel) << ", flow " << to_string(s.flow) << ", N=" << s.nanomachines
              << ", B=" << s.biomarkers << ", trials=" << s.trials << ", seed=" << s.master_seed << '\n';
    std::cout << "P_d = " << detail::format_double(e.p_d) << "  95% CI [" << detail::format_double(e.ci_low) << ", "
              << detail::format_double(e.ci_high) << "]  (" << e.detected << "/" << e.total << " biomarkers)\n";
    if (o.verbose) std::cerr << "wall time " << seconds << " s\n";

    if (!o.out.empty()) {
        Sink sink(o, "run.csv");
        write_results(sink.stream(), {{std::string(to_string(s.vessel)), std::string(to_string(s.flow)),
                                       "nanomachines", static_cast<double>(s.nanomachines), e.p_d, e.ci_low,
                                       e.ci_high, e.trials, s.master_seed}});
        if (o.events) {
            Sink ev(o, "events.csv");
            ev.stream() << events_header << '\n';
            for (std::size_t i = 0; i < batch.outcomes.size(); ++i) write_events(ev.stream(), i, batch.outcomes[i].events);
        }
        write_summary(o, "run", s, seconds, 1);
    }
    return 0;
}

int emit_sweep(const Options& o, const SweepSpec& spec, const std::string& name, const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    const SweepResult rows = run_sweep(spec, o.threads, progress_for(o));
    Sink sink(o, name);
    write_results(sink.stream(), rows);
    write_summary(o, command, spec.base, seconds_since(start), rows.size());
    if (!o.quiet && !sink.path().empty()) std::cerr << "wrote " << sink.path() << '\n';
    return 0;
}

int emit_design(const Options& o, const Settings& s, const std::string& name, const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    const auto rows = run_design_table(s, o.threads, progress_for(o));
    Sink sink(o, name);
    write_design(sink.stream(), rows);
    write_summary(o, command, s, seconds_since(start), rows.size());
    if (!o.quiet && !sink.path().empty()) std::cerr << "wrote " << sink.path() << '\n';
    return 0;
}

int cmd_validate(const Options& o) {
    const Settings s = load(o);
    for (const auto& [k, v] : describe(s)) std::cout << k << " = " << v << '\n';
    for (const auto& [k, v] : describe_resolved(s)) std::cout << k << " = " << v << '\n';
    make_sweep(s); // rejects sweep.* combinations that cannot run
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nanoscout: Monte Carlo detection of circulating biomarkers by passive nanomachines"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    Options o;
    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (default: stdout)");
        sub->add_option("--seed", o.seed, "master seed, overrides sim.master_seed");
        sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
        sub->add_option("--override", o.overrides, "KEY=VALUE using config-file keys (repeatable)")
            ->allow_extra_args(false);
        auto* quiet = sub->add_flag("--quiet", o.quiet, "no progress output");
        sub->add_flag("--verbose", o.verbose, "extra diagnostics")->excludes(quiet);
    };

    auto* run = app.add_subcommand("run", "one batch of trials; prints P_d and its 95% interval");
    common(run);
    run->add_flag("--events", o.events, "write the per-trial detection log to DIR/events.csv");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep described by sweep.* keys");
    common(sweep);
    auto* design = app.add_subcommand("design-table", "minimal nanomachine counts for target P_d");
    common(design);
    auto* reproduce = app.add_subcommand("reproduce", "preset sweeps: fig4 fig5 fig6 fig7 fig8 table3");
    common(reproduce);
    std::vector<std::string> ids(reproduce_ids().begin(), reproduce_ids().end());
    reproduce->add_option("figure", o.figure, "figure id")->required()->check(CLI::IsMember(ids));
    auto* validate = app.add_subcommand("validate", "print the resolved parameter set without simulating");
    common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(o);
        if (sweep->parsed()) {
            const Settings s = load(o);
            return emit_sweep(o, make_sweep(s), "sweep.csv", "sweep");
        }
        if (design->parsed()) return emit_design(o, load(o), "design_table.csv", "design-table");
        if (reproduce->parsed()) {
            const Settings s = load(o);
            if (o.figure == "table3") return emit_design(o, reproduce_table(s), "table3.csv", "reproduce table3");
            return emit_sweep(o, reproduce_sweep(o.figure, s), o.figure + ".csv", "reproduce " + o.figure);
        }
        if (validate->parsed()) return cmd_validate(o);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
