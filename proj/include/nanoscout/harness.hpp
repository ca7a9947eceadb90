// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nanoscout/config.hpp"
#include "nanoscout/engine.hpp"

namespace nanoscout {

struct SweepSpec {
    SweepKind kind = SweepKind::count;
    Settings base{};
    std::vector<VesselKind> vessels;
    std::vector<double> values; // SI for size sweeps
    std::vector<Variant> variants;

    void validate() const;
};

struct SweepRow {
    std::string vessel;
    std::string variant;
    std::string axis_name;
    double axis_value = 0.0;
    double p_d = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

using SweepResult = std::vector<SweepRow>;

inline std::vector<double> default_axis(SweepKind kind) {
    switch (kind) {
    case SweepKind::count: return {20, 50, 100, 200, 500, 1000};
    case SweepKind::cofactor: return {0.0125, 0.025, 0.05, 0.1, 0.25, 0.5, 1.0};
    case SweepKind::margination: return {0.0, 0.05, 0.1, 0.25, 0.5, 0.6};
    case SweepKind::size:
        return {units::nm(100), units::nm(250), units::nm(500), units::nm(1000), units::nm(1500),
                units::nm(2000)};
    }
    return {};
}

inline std::vector<Variant> default_variants(SweepKind kind) {
    switch (kind) {
    case SweepKind::count:
    case SweepKind::cofactor: return {Variant::uniform, Variant::laminar};
    case SweepKind::margination: return {Variant::laminar};
    case SweepKind::size: return {Variant::simplified, Variant::realistic};
    }
    return {Variant::laminar};
}

inline std::string_view axis_name(SweepKind kind) {
    switch (kind) {
    case SweepKind::count: return "nanomachines";
    case SweepKind::cofactor: return "cofactor";
    case SweepKind::margination: return "margination";
    case SweepKind::size: return "radius_nm";
    }
    return "";
}

/// Axis value as written to the results table (radii in nm).
inline double axis_output_value(SweepKind kind, double value) {
    return kind == SweepKind::size ? std::round(units::in_nm(value) * 1e6) / 1e6 : value;
}

/// Sweep described by the `sweep.*` settings, defaults filled in.
inline SweepSpec make_sweep(const Settings& s) {
    SweepSpec spec;
    spec.kind = s.sweep_kind;
    spec.base = s;
    spec.vessels = s.sweep_vessels.empty() ? std::vector<VesselKind>{s.vessel} : s.sweep_vessels;
    spec.values = s.sweep_values.empty() ? default_axis(s.sweep_kind) : s.sweep_values;
    spec.variants = s.sweep_variants.empty() ? default_variants(s.sweep_kind) : s.sweep_variants;
    spec.validate();
    return spec;
}

inline void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep.values: must not be empty");
    if (variants.empty()) throw ConfigError("sweep.variants: must not be empty");
    if (vessels.empty()) throw ConfigError("sweep.vessels: must not be empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) throw ConfigError("sweep.values: must be strictly increasing");
    }
    for (double v : values) {
        switch (kind) {
        case SweepKind::count:
            if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("sweep.values: counts must be positive integers");
            break;
        case SweepKind::cofactor:
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("sweep.values: cofactors must lie in [0, 1]");
            break;
        case SweepKind::margination:
            if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("sweep.values: margination must lie in [0, 1]");
            break;
        case SweepKind::size:
            // A bare number this large is almost surely a forgotten unit suffix.
            if (!(v > 0.0) || v > 1e-3) throw ConfigError("sweep.values: radii must be lengths, e.g. 500nm");
            break;
        }
    }
    for (auto v : variants) {
        const bool size_variant = v == Variant::simplified || v == Variant::realistic;
        if (size_variant != (kind == SweepKind::size)) {
            throw ConfigError("sweep.variants: '" + std::string(to_string(v)) + "' does not apply to a " +
                              std::string(to_string(kind)) + " sweep");
        }
    }
}

/// Settings of one sweep point.
inline Settings sweep_point(const SweepSpec& spec, VesselKind vessel, Variant variant, double value) {
    Settings s = spec.base;
    if (vessel != s.vessel) {
        s.vessel = vessel;
        s.diameter.reset();
        s.length.reset();
        s.v_max.reset();
        s.cells = 0;
    }
    switch (variant) {
    case Variant::uniform: s.flow = FlowKind::uniform; break;
    case Variant::laminar: s.flow = FlowKind::laminar; break;
    case Variant::laminar_discretized: s.flow = FlowKind::laminar_discretized; break;
    case Variant::simplified:
        s.flow = FlowKind::uniform;
        s.cofactor = 1.0;
        s.margination = 0.0;
        break;
    case Variant::realistic:
        s.flow = FlowKind::laminar;
        s.cofactor.reset();
        s.margination.reset();
        break;
    }
    switch (spec.kind) {
    case SweepKind::count: s.nanomachines = static_cast<std::size_t>(value); break;
    case SweepKind::cofactor: s.cofactor = value; break;
    case SweepKind::margination:
        s.strategy = ReleasePlan::Strategy::regions;
        s.margination = value;
        break;
    case SweepKind::size: s.nanomachine_radius = value; break;
    }
    if (spec.kind == SweepKind::size || variant == Variant::realistic || variant == Variant::simplified) {
        s.strategy = ReleasePlan::Strategy::regions;
    }
    return s;
}

using Progress = std::function<void(std::string_view)>;

/// Every (vessel, variant, value) point, in that nesting order. All points
/// share the master seed, so they see common random numbers.
inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0, const Progress& progress = {}) {
    spec.validate();
    const Settings& base = spec.base;
    SweepResult rows;
    for (auto vessel : spec.vessels) {
        for (auto variant : spec.variants) {
            for (double value : spec.values) {
                const TrialConfig config = make_trial_config(sweep_point(spec, vessel, variant, value));
                const BatchEstimate e = run_batch(config, base.trials, base.master_seed, threads);
                SweepRow row{std::string(to_string(vessel)), std::string(to_string(variant)),
                             std::string(axis_name(spec.kind)), axis_output_value(spec.kind, value),
                             e.p_d, e.ci_low, e.ci_high, e.trials, base.master_seed};
                if (progress) {
                    progress(row.vessel + " " + row.variant + " " + row.axis_name + "=" +
                             detail::format_double(row.axis_value) + " p_d=" + detail::format_double(row.p_d));
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Design table

struct DesignRow {
    VesselKind vessel = VesselKind::capillary;
    double radius = 0.0; // m
    double target = 0.0;
    std::size_t nanomachines = 0;
    bool attainable = true;
    BatchEstimate estimate{};
    std::uint64_t master_seed = 0;
    /// Every (N, p_d) evaluated by the search, sorted by N.
    std::vector<std::pair<std::size_t, BatchEstimate>> evaluated;
    /// False when an evaluated point contradicts monotonicity in N by more
    /// than the two Wilson half-widths combined.
    bool monotone = true;
};

struct DesignSearch {
    double tolerance = 0.02;
    std::size_t trials = 200;
    std::size_t start = 10;
    std::size_t max_n = 100000;
    std::uint64_t master_seed = default_master_seed;
};

/// Smallest N whose batch estimate reaches `target`: doubling from
/// `search.start`, then integer bisection. Stops early on any evaluation
/// within `tolerance` of the target. `evaluate(N)` must be deterministic.
inline DesignRow design_search(const std::function<BatchEstimate(std::size_t)>& evaluate, double target,
                               const DesignSearch& search) {
    if (!(target >= 0.0 && target < 1.0)) throw ArgumentError("design_search: target must lie in [0, 1)");
    if (search.start < 1 || search.max_n < search.start) throw ArgumentError("design_search: bad N range");
    DesignRow row;
    row.target = target;
    row.master_seed = search.master_seed;
    std::map<std::size_t, BatchEstimate> seen;
    const auto eval = [&](std::size_t n) -> const BatchEstimate& {
        auto it = seen.find(n);
        if (it == seen.end()) it = seen.emplace(n, evaluate(n)).first;
        return it->second;
    };
    const auto close = [&](const BatchEstimate& e) { return std::abs(e.p_d - target) <= search.tolerance; };
    const auto finish = [&](std::size_t n, bool attainable) {
        row.nanomachines = n;
        row.attainable = attainable;
        row.estimate = eval(n);
        for (const auto& [k, e] : seen) row.evaluated.emplace_back(k, e);
        for (std::size_t i = 0; i < row.evaluated.size(); ++i) {
            for (std::size_t j = i + 1; j < row.evaluated.size(); ++j) {
                const auto& a = row.evaluated[i].second;
                const auto& b = row.evaluated[j].second;
                if (b.p_d < a.p_d - (a.half_width() + b.half_width())) row.monotone = false;
            }
        }
        return row;
    };

    if (target <= 0.0) return finish(1, true);

    std::size_t lo = 0; // largest N known to fall short (0: none evaluated)
    std::size_t hi = search.start;
    while (true) {
        const BatchEstimate& e = eval(hi);
        if (close(e)) return finish(hi, true);
        if (e.p_d >= target) break;
        if (hi == search.max_n) return finish(hi, false);
        lo = hi;
        hi = std::min(hi * 2, search.max_n);
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const BatchEstimate& e = eval(mid);
        if (close(e)) return finish(mid, true);
        if (e.p_d >= target) hi = mid;
        else lo = mid;
    }
    return finish(hi, true);
}

/// Design-table search for one (vessel, radius, target) under the realistic
/// model: laminar flow, size-derived cofactor and margination.
inline DesignRow design_table(const Settings& base, VesselKind vessel, double radius, double target,
                              const DesignSearch& search, unsigned threads = 0) {
    SweepSpec spec;
    spec.kind = SweepKind::size;
    spec.base = base;
    Settings s = sweep_point(spec, vessel, Variant::realistic, radius);
    DesignRow row = design_search(
        [&](std::size_t n) {
            Settings point = s;
            point.nanomachines = n;
            return run_batch(make_trial_config(point), search.trials, search.master_seed, threads);
        },
        target, search);
    row.vessel = vessel;
    row.radius = radius;
    return row;
}

/// Every (vessel, radius, target) of the `design.*` settings, ordered by
/// target, then vessel, then radius.
inline std::vector<DesignRow> run_design_table(const Settings& s, unsigned threads = 0,
                                               const Progress& progress = {}) {
    if (s.design_vessels.empty() || s.design_radii.empty() || s.design_targets.empty()) {
        throw ConfigError("design: vessels, radii and targets must not be empty");
    }
    std::vector<DesignRow> rows;
    for (double target : s.design_targets) {
        for (auto vessel : s.design_vessels) {
            for (double radius : s.design_radii) {
                DesignSearch search;
                search.tolerance = s.design_tolerance;
                search.trials = vessel == VesselKind::arteriole ? s.design_arteriole_trials : s.design_trials;
                search.max_n = s.design_max_n;
                search.master_seed = s.master_seed;
                rows.push_back(design_table(s, vessel, radius, target, search, threads));
                if (progress) {
                    const auto& r = rows.back();
                    progress(std::string(to_string(vessel)) + " radius=" + detail::format_length(radius) +
                             " target=" + detail::format_double(target) + " N=" + std::to_string(r.nanomachines) +
                             (r.attainable ? "" : " (unattainable)"));
                }
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Presets behind the published figures

inline const std::vector<std::string_view>& reproduce_ids() {
    static const std::vector<std::string_view> ids{"fig4", "fig5", "fig6", "fig7", "fig8", "table3"};
    return ids;
}

/// Sweep spec for fig4..fig8, layered on `base`.
inline SweepSpec reproduce_sweep(std::string_view id, const Settings& base) {
    const std::vector<VesselKind> all{VesselKind::capillary, VesselKind::venule, VesselKind::arteriole};
    Settings s = base;
    s.sweep_values.clear();
    s.sweep_variants.clear();
    s.sweep_vessels = all;
    s.nanomachine_radius = default_nanomachine_radius;
    s.cofactor.reset();
    s.margination = 0.0;
    s.nanomachines = 100;
    if (id == "fig4") {
        s.sweep_kind = SweepKind::count;
    } else if (id == "fig5") {
        s.sweep_kind = SweepKind::cofactor;
        s.sweep_vessels = {VesselKind::capillary};
    } else if (id == "fig6") {
        s.sweep_kind = SweepKind::cofactor;
        s.sweep_variants = {Variant::laminar};
    } else if (id == "fig7") {
        s.sweep_kind = SweepKind::margination;
    } else if (id == "fig8") {
        s.sweep_kind = SweepKind::size;
    } else {
        throw ConfigError("reproduce: unknown figure id '" + std::string(id) + "'");
    }
    return make_sweep(s);
}

/// Design-table preset: three vessels x {500, 1000, 2000} nm x {0.25, 0.5}.
inline Settings reproduce_table(const Settings& base) {
    Settings s = base;
    s.design_vessels = {VesselKind::capillary, VesselKind::venule, VesselKind::arteriole};
    s.design_radii = {units::nm(500), units::nm(1000), units::nm(2000)};
    s.design_targets = {0.25, 0.5};
    return s;
}

} // namespace nanoscout
