// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nanoscout/config.hpp"
#include "nanoscout/engine.hpp"
#include "nanoscout/harness.hpp"

namespace nanoscout {

inline constexpr std::string_view tool_version = "0.1.0";

inline constexpr std::string_view results_header = "vessel,variant,axis_name,axis_value,p_d,ci_low,ci_high,trials,master_seed";
inline constexpr std::string_view design_header =
    "vessel,radius_nm,target_p_d,nanomachines,attainable,p_d,ci_low,ci_high,trials,master_seed";
inline constexpr std::string_view events_header = "trial,step,time_s,nanomachine_id,biomarker_id,x,y,z";

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double csv_double(const std::string& text, std::string_view column, std::size_t line) {
    std::string_view rest;
    try {
        const double v = parse_number(text, rest);
        if (rest.empty()) return v;
    } catch (const ConfigError&) {
    }
    throw ConfigError("results line " + std::to_string(line) + ": bad " + std::string(column) + " '" + text + "'");
}

inline std::uint64_t csv_unsigned(const std::string& text, std::string_view column, std::size_t line) {
    try {
        return parse_unsigned(text);
    } catch (const ConfigError&) {
        throw ConfigError("results line " + std::to_string(line) + ": bad " + std::string(column) + " '" + text + "'");
    }
}

} // namespace detail

/// Numbers use the shortest representation that reads back exactly, so the
/// table round-trips and identical runs give identical bytes.
inline void write_results(std::ostream& out, const SweepResult& rows) {
    using detail::format_double;
    out << results_header << '\n';
    for (const auto& r : rows) {
        out << r.vessel << ',' << r.variant << ',' << r.axis_name << ',' << format_double(r.axis_value) << ','
            << format_double(r.p_d) << ',' << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
            << r.trials << ',' << r.master_seed << '\n';
    }
}

inline std::string results_to_string(const SweepResult& rows) {
    std::ostringstream out;
    write_results(out, rows);
    return out.str();
}

inline SweepResult read_results(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != results_header) {
        throw ConfigError("results: header must be '" + std::string(results_header) + "'");
    }
    SweepResult rows;
    for (std::size_t number = 2; std::getline(in, line); ++number) {
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 9) throw ConfigError("results line " + std::to_string(number) + ": expected 9 fields");
        SweepRow r;
        r.vessel = f[0];
        r.variant = f[1];
        r.axis_name = f[2];
        r.axis_value = detail::csv_double(f[3], "axis_value", number);
        r.p_d = detail::csv_double(f[4], "p_d", number);
        r.ci_low = detail::csv_double(f[5], "ci_low", number);
        r.ci_high = detail::csv_double(f[6], "ci_high", number);
        r.trials = detail::csv_unsigned(f[7], "trials", number);
        r.master_seed = detail::csv_unsigned(f[8], "master_seed", number);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline void write_results_file(const std::string& path, const SweepResult& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_results(out, rows);
}

inline SweepResult read_results_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open results file");
    return read_results(in);
}

inline void write_design(std::ostream& out, const std::vector<DesignRow>& rows) {
    using detail::format_double;
    out << design_header << '\n';
    for (const auto& r : rows) {
        out << to_string(r.vessel) << ',' << format_double(axis_output_value(SweepKind::size, r.radius)) << ','
            << format_double(r.target) << ',' << r.nanomachines << ',' << (r.attainable ? "true" : "false") << ','
            << format_double(r.estimate.p_d) << ',' << format_double(r.estimate.ci_low) << ','
            << format_double(r.estimate.ci_high) << ',' << r.estimate.trials << ',' << r.master_seed << '\n';
    }
}

/// Appends the events of one trial.
inline void write_events(std::ostream& out, std::size_t trial, const std::vector<DetectionEvent>& events) {
    using detail::format_double;
    for (const auto& e : events) {
        out << trial << ',' << e.step << ',' << format_double(e.time) << ',' << e.nanomachine << ',' << e.biomarker
            << ',' << format_double(e.position.x) << ',' << format_double(e.position.y) << ','
            << format_double(e.position.z) << '\n';
    }
}

struct RunSummary {
    std::string command;
    Settings settings;
    double wall_time_s = 0.0;
    std::size_t rows = 0;
};

inline nlohmann::json summary_json(const RunSummary& s) {
    std::ostringstream digest;
    digest << std::hex << std::setw(16) << std::setfill('0') << config_digest(s.settings);
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : describe(s.settings)) config[k] = v;
    return {{"tool", "nanoscout"},
            {"version", std::string(tool_version)},
            {"command", s.command},
            {"config_digest", "fnv1a64:" + digest.str()},
            {"master_seed", s.settings.master_seed},
            {"wall_time_s", s.wall_time_s},
            {"rows", s.rows},
            {"config", config}};
}

} // namespace nanoscout
