// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Configuration files: one `key = value` per line, `#` starts a comment,
// `[section]` prefixes the following keys with `section.`. Quantities carry
// an optional unit suffix (bare numbers are SI):
//
//   length   m mm um nm        time   s ms us
//   speed    m_per_s mm_per_s um_per_s
//   temperature K              viscosity Pa_s mPa_s
//
// Every key, its default and its meaning is listed in README.md.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nanoscout/common.hpp"
#include "nanoscout/engine.hpp"
#include "nanoscout/flow.hpp"
#include "nanoscout/kinetics.hpp"
#include "nanoscout/release.hpp"
#include "nanoscout/vessel.hpp"

namespace nanoscout {

enum class SweepKind { count, cofactor, margination, size };

inline std::string_view to_string(SweepKind k) {
    switch (k) {
    case SweepKind::count: return "count";
    case SweepKind::cofactor: return "cofactor";
    case SweepKind::margination: return "margination";
    case SweepKind::size: return "size";
    }
    return "count";
}

/// Model toggles compared within one sweep.
enum class Variant { uniform, laminar, laminar_discretized, simplified, realistic };

inline std::string_view to_string(Variant v) {
    switch (v) {
    case Variant::uniform: return "uniform";
    case Variant::laminar: return "laminar";
    case Variant::laminar_discretized: return "laminar_discretized";
    case Variant::simplified: return "simplified";
    case Variant::realistic: return "realistic";
    }
    return "laminar";
}

inline constexpr std::uint64_t default_master_seed = 2026;

/// Default horizon in units of the centerline transit time L / v_max.
inline constexpr double default_horizon = 0.25;

/// Fully resolved parameter set. `std::nullopt` means "derive it".
struct Settings {
    VesselKind vessel = VesselKind::capillary;
    std::optional<double> diameter;
    std::optional<double> length;
    std::optional<double> v_max;

    FlowKind flow = FlowKind::laminar;
    std::size_t cells = 0; // 0: preset count for the vessel

    double biomarker_radius = default_biomarker_radius;
    double nanomachine_radius = default_nanomachine_radius;
    std::optional<double> cofactor; // nullopt: a_b / a_n

    double dt = 1e-4;
    double temperature = default_temperature;
    double viscosity = default_viscosity;

    ReleasePlan::Strategy strategy = ReleasePlan::Strategy::regions;
    std::optional<double> margination = 0.0; // nullopt: from nanomachine size
    double jitter = 0.0;
    double slab = 0.1;
    BiomarkerPlacement biomarkers_at = BiomarkerPlacement::centerline;
    NearWallRule::Mode near_wall = NearWallRule::Mode::thickness;

    std::optional<double> d_det; // nullopt: contact distance a_n + a_b
    double margin = 0.0;

    std::optional<double> t_max; // nullopt: horizon * L / v_max
    double horizon = default_horizon;
    std::size_t trials = 100;
    std::uint64_t master_seed = default_master_seed;
    std::size_t nanomachines = 100;
    std::size_t biomarkers = 3;

    SweepKind sweep_kind = SweepKind::count;
    std::vector<double> sweep_values;          // empty: default grid for the kind
    std::vector<Variant> sweep_variants;       // empty: default pair for the kind
    std::vector<VesselKind> sweep_vessels;     // empty: just `vessel`

    std::vector<VesselKind> design_vessels{VesselKind::capillary, VesselKind::venule, VesselKind::arteriole};
    std::vector<double> design_radii{units::nm(500), units::nm(1000), units::nm(2000)};
    std::vector<double> design_targets{0.25, 0.5};
    double design_tolerance = 0.02;
    std::size_t design_trials = 200;
    std::size_t design_arteriole_trials = 200;
    std::size_t design_max_n = 100000;
};

// ---------------------------------------------------------------------------
// Resolution into engine inputs

inline VesselSpec resolve_vessel(const Settings& s) {
    VesselSpec v;
    if (s.vessel == VesselKind::custom) {
        if (!s.diameter || !s.length || !s.v_max) {
            throw ConfigError("vessel: custom vessels need vessel.diameter, vessel.length and vessel.v_max");
        }
        v = {VesselKind::custom, *s.diameter, *s.length, *s.v_max};
    } else {
        if (s.diameter || s.length) {
            throw ConfigError("vessel.diameter: preset dimensions are fixed; use vessel = custom");
        }
        v = preset(s.vessel);
        if (s.v_max) {
            const SpeedRange range = preset_speed_range(s.vessel);
            if (*s.v_max < range.low || *s.v_max > range.high) {
                throw ConfigError("vessel.v_max: outside the tabulated range for " + std::string(to_string(s.vessel)));
            }
            v.v_max = *s.v_max;
        }
    }
    v.validate();
    return v;
}

inline double resolve_cofactor(const Settings& s) {
    if (s.cofactor) return *s.cofactor;
    try {
        return velocity_cofactor(s.nanomachine_radius, s.biomarker_radius);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("species.nanomachine.cofactor: ") + e.what());
    }
}

inline double resolve_margination(const Settings& s) {
    if (s.margination) return *s.margination;
    try {
        return margination_for_size(s.nanomachine_radius, smallest_nanomachine_radius, largest_nanomachine_radius);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("release.margination: auto needs a radius in [100nm, 2000nm]: ") + e.what());
    }
}

inline double resolve_detection_range(const Settings& s) {
    return s.d_det ? *s.d_det + s.margin : s.nanomachine_radius + s.biomarker_radius + s.margin;
}

inline double resolve_t_max(const Settings& s, const VesselSpec& v) {
    return s.t_max ? *s.t_max : s.horizon * v.length / v.v_max;
}

inline TrialConfig make_trial_config(const Settings& s) {
    TrialConfig c;
    c.vessel = resolve_vessel(s);
    const std::size_t cells = s.cells == 0 ? default_cell_count(c.vessel.kind) : s.cells;
    c.flow = make_flow(s.flow, c.vessel, cells);
    if (!(s.temperature > 0.0)) throw ConfigError("physics.temperature: must be positive");
    if (!(s.viscosity > 0.0)) throw ConfigError("physics.viscosity: must be positive");
    if (!(s.biomarker_radius > 0.0)) throw ConfigError("species.biomarker.radius: must be positive");
    if (!(s.nanomachine_radius > 0.0)) throw ConfigError("species.nanomachine.radius: must be positive");
    c.biomarker = make_biomarker(s.biomarker_radius, s.temperature, s.viscosity);
    c.nanomachine = make_nanomachine(s.nanomachine_radius, resolve_cofactor(s), s.temperature, s.viscosity);
    c.biomarkers = s.biomarkers;
    c.nanomachines = s.nanomachines;
    if (s.strategy == ReleasePlan::Strategy::points) {
        c.release = default_points(c.vessel);
        c.release.jitter = s.jitter;
    } else {
        c.release.strategy = ReleasePlan::Strategy::regions;
        c.release.margination = resolve_margination(s);
        c.release.jitter = s.jitter;
    }
    c.release.slab_fraction = s.slab;
    c.release.biomarkers = s.biomarkers_at;
    c.release.near_wall.mode = s.near_wall;
    c.dt = s.dt;
    if (!(s.horizon > 0.0)) throw ConfigError("sim.horizon: must be positive");
    c.t_max = resolve_t_max(s, c.vessel);
    c.detection_range = resolve_detection_range(s);
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Value parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

struct UnitTable {
    std::string_view dimension;
    std::vector<std::pair<std::string_view, double>> units; // SI value = number / divisor
};

inline const UnitTable& length_units() {
    static const UnitTable t{"length", {{"m", 1.0}, {"mm", 1e3}, {"um", 1e6}, {"nm", 1e9}}};
    return t;
}
inline const UnitTable& time_units() {
    static const UnitTable t{"time", {{"s", 1.0}, {"ms", 1e3}, {"us", 1e6}}};
    return t;
}
inline const UnitTable& speed_units() {
    static const UnitTable t{"speed", {{"m_per_s", 1.0}, {"mm_per_s", 1e3}, {"um_per_s", 1e6}}};
    return t;
}
inline const UnitTable& temperature_units() {
    static const UnitTable t{"temperature", {{"K", 1.0}}};
    return t;
}
inline const UnitTable& viscosity_units() {
    static const UnitTable t{"viscosity", {{"Pa_s", 1.0}, {"mPa_s", 1e3}}};
    return t;
}
inline const UnitTable& no_units() {
    static const UnitTable t{"dimensionless", {}};
    return t;
}

inline double parse_number(std::string_view text, std::string_view& rest) {
    double value = 0.0;
    const char* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc{} || ptr == first) throw ConfigError("expected a number, got '" + std::string(text) + "'");
    rest = trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)));
    if (!std::isfinite(value)) throw ConfigError("value must be finite");
    return value;
}

/// Number with an optional unit suffix, converted to SI.
inline double parse_quantity(std::string_view text, const UnitTable& table) {
    std::string_view suffix;
    const double value = parse_number(trim(text), suffix);
    if (suffix.empty()) return value;
    for (const auto& [name, divisor] : table.units) {
        if (name == suffix) return value / divisor;
    }
    throw ConfigError("unit '" + std::string(suffix) + "' is not a " + std::string(table.dimension) + " unit");
}

inline std::uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

inline std::size_t parse_count(std::string_view text) {
    const auto v = parse_unsigned(text);
    if (v == 0) throw ConfigError("must be at least 1");
    return static_cast<std::size_t>(v);
}

template <class Enum, std::size_t K>
Enum parse_choice(std::string_view text, const std::array<Enum, K>& options) {
    text = trim(text);
    std::string allowed;
    for (auto o : options) {
        if (to_string(o) == text) return o;
        allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(o));
    }
    throw ConfigError("expected one of {" + allowed + "}, got '" + std::string(text) + "'");
}

inline VesselKind parse_vessel(std::string_view text) {
    return parse_choice(text, std::array{VesselKind::capillary, VesselKind::venule, VesselKind::arteriole,
                                         VesselKind::custom});
}

inline Variant parse_variant(std::string_view text) {
    return parse_choice(text, std::array{Variant::uniform, Variant::laminar, Variant::laminar_discretized,
                                         Variant::simplified, Variant::realistic});
}

template <class F>
auto parse_list(std::string_view text, F&& one) {
    std::vector<decltype(one(text))> out;
    for (auto item : split_list(text)) out.push_back(one(item));
    if (out.empty() || (out.size() == 1 && trim(text).empty())) throw ConfigError("list must not be empty");
    return out;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

/// Length in nm below one micrometre, in um above.
inline std::string format_length(double m) {
    const double nm = std::round(units::in_nm(m) * 1e6) / 1e6;
    if (std::abs(nm) >= 1000.0) return format_double(nm / 1000.0) + "um";
    return format_double(nm) + "nm";
}

struct Key {
    std::string_view name;
    std::function<void(Settings&, std::string_view)> set;
    std::function<std::string(const Settings&)> show;
};

inline const std::vector<Key>& keys() {
    using S = Settings;
    static const std::vector<Key> table = [] {
        std::vector<Key> k;
        const auto opt_len = [](const std::optional<double>& v) { return v ? format_length(*v) : std::string("preset"); };
        k.push_back({"vessel", [](S& s, auto v) { s.vessel = parse_vessel(v); },
                     [](const S& s) { return std::string(to_string(s.vessel)); }});
        k.push_back({"vessel.diameter", [](S& s, auto v) { s.diameter = parse_quantity(v, length_units()); },
                     [=](const S& s) { return opt_len(s.diameter); }});
        k.push_back({"vessel.length", [](S& s, auto v) { s.length = parse_quantity(v, length_units()); },
                     [=](const S& s) { return opt_len(s.length); }});
        k.push_back({"vessel.v_max", [](S& s, auto v) { s.v_max = parse_quantity(v, speed_units()); },
                     [](const S& s) {
                         return s.v_max ? format_double(units::in_mm_per_s(*s.v_max)) + "mm_per_s" : std::string("preset");
                     }});
        k.push_back({"flow.model",
                     [](S& s, auto v) {
                         s.flow = parse_choice(v, std::array{FlowKind::uniform, FlowKind::laminar,
                                                             FlowKind::laminar_discretized});
                     },
                     [](const S& s) { return std::string(to_string(s.flow)); }});
        k.push_back({"flow.cells",
                     [](S& s, auto v) {
                         s.cells = trim(v) == "auto" ? 0 : parse_count(v);
                     },
                     [](const S& s) { return s.cells == 0 ? std::string("auto") : std::to_string(s.cells); }});
        k.push_back({"species.biomarker.radius",
                     [](S& s, auto v) { s.biomarker_radius = parse_quantity(v, length_units()); },
                     [](const S& s) { return format_length(s.biomarker_radius); }});
        k.push_back({"species.nanomachine.radius",
                     [](S& s, auto v) { s.nanomachine_radius = parse_quantity(v, length_units()); },
                     [](const S& s) { return format_length(s.nanomachine_radius); }});
        k.push_back({"species.nanomachine.cofactor",
                     [](S& s, auto v) {
                         if (trim(v) == "auto") {
                             s.cofactor.reset();
                             return;
                         }
                         const double a = parse_quantity(v, no_units());
                         if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("must lie in [0, 1]");
                         s.cofactor = a;
                     },
                     [](const S& s) { return s.cofactor ? format_double(*s.cofactor) : std::string("auto"); }});
        k.push_back({"kinetics.dt",
                     [](S& s, auto v) {
                         s.dt = parse_quantity(v, time_units());
                         if (!(s.dt > 0.0)) throw ConfigError("must be positive");
                     },
                     [](const S& s) { return format_double(s.dt) + "s"; }});
        k.push_back({"physics.temperature",
                     [](S& s, auto v) { s.temperature = parse_quantity(v, temperature_units()); },
                     [](const S& s) { return format_double(s.temperature) + "K"; }});
        k.push_back({"physics.viscosity",
                     [](S& s, auto v) { s.viscosity = parse_quantity(v, viscosity_units()); },
                     [](const S& s) { return format_double(s.viscosity) + "Pa_s"; }});
        k.push_back({"release.strategy",
                     [](S& s, auto v) {
                         s.strategy = parse_choice(v, std::array{ReleasePlan::Strategy::points,
                                                                 ReleasePlan::Strategy::regions});
                     },
                     [](const S& s) { return std::string(to_string(s.strategy)); }});
        k.push_back({"release.margination",
                     [](S& s, auto v) {
                         if (trim(v) == "auto") {
                             s.margination.reset();
                             return;
                         }
                         const double m = parse_quantity(v, no_units());
                         if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("must lie in [0, 1]");
                         s.margination = m;
                     },
                     [](const S& s) { return s.margination ? format_double(*s.margination) : std::string("auto"); }});
        k.push_back({"release.jitter",
                     [](S& s, auto v) {
                         s.jitter = parse_quantity(v, length_units());
                         if (!(s.jitter >= 0.0)) throw ConfigError("must be non-negative");
                     },
                     [](const S& s) { return format_length(s.jitter); }});
        k.push_back({"release.slab",
                     [](S& s, auto v) {
                         s.slab = parse_quantity(v, no_units());
                         if (!(s.slab > 0.0 && s.slab <= 1.0)) throw ConfigError("must lie in (0, 1]");
                     },
                     [](const S& s) { return format_double(s.slab); }});
        k.push_back({"release.biomarkers",
                     [](S& s, auto v) {
                         s.biomarkers_at = parse_choice(
                             v, std::array{BiomarkerPlacement::centerline, BiomarkerPlacement::cross_section});
                     },
                     [](const S& s) { return std::string(to_string(s.biomarkers_at)); }});
        k.push_back({"release.near_wall",
                     [](S& s, auto v) {
                         const auto t = trim(v);
                         if (t == "thickness") s.near_wall = NearWallRule::Mode::thickness;
                         else if (t == "area_fraction") s.near_wall = NearWallRule::Mode::area_fraction;
                         else throw ConfigError("expected one of {thickness, area_fraction}");
                     },
                     [](const S& s) {
                         return std::string(s.near_wall == NearWallRule::Mode::thickness ? "thickness" : "area_fraction");
                     }});
        k.push_back({"detection.d_det",
                     [](S& s, auto v) {
                         if (trim(v) == "contact") {
                             s.d_det.reset();
                             return;
                         }
                         const double d = parse_quantity(v, length_units());
                         if (!(d > 0.0)) throw ConfigError("must be positive");
                         s.d_det = d;
                     },
                     [](const S& s) { return s.d_det ? format_length(*s.d_det) : std::string("contact"); }});
        k.push_back({"detection.margin",
                     [](S& s, auto v) {
                         s.margin = parse_quantity(v, length_units());
                         if (!(s.margin >= 0.0)) throw ConfigError("must be non-negative");
                     },
                     [](const S& s) { return format_length(s.margin); }});
        k.push_back({"sim.t_max",
                     [](S& s, auto v) {
                         if (trim(v) == "auto") {
                             s.t_max.reset();
                             return;
                         }
                         const double t = parse_quantity(v, time_units());
                         if (!(t > 0.0)) throw ConfigError("must be positive");
                         s.t_max = t;
                     },
                     [](const S& s) { return s.t_max ? format_double(*s.t_max) + "s" : std::string("auto"); }});
        k.push_back({"sim.horizon",
                     [](S& s, auto v) {
                         s.horizon = parse_quantity(v, no_units());
                         if (!(s.horizon > 0.0)) throw ConfigError("must be positive");
                     },
                     [](const S& s) { return format_double(s.horizon); }});
        k.push_back({"sim.trials", [](S& s, auto v) { s.trials = parse_count(v); },
                     [](const S& s) { return std::to_string(s.trials); }});
        k.push_back({"sim.master_seed", [](S& s, auto v) { s.master_seed = parse_unsigned(v); },
                     [](const S& s) { return std::to_string(s.master_seed); }});
        k.push_back({"sim.nanomachines", [](S& s, auto v) { s.nanomachines = parse_count(v); },
                     [](const S& s) { return std::to_string(s.nanomachines); }});
        k.push_back({"sim.biomarkers", [](S& s, auto v) { s.biomarkers = parse_count(v); },
                     [](const S& s) { return std::to_string(s.biomarkers); }});
        k.push_back({"sweep.kind",
                     [](S& s, auto v) {
                         s.sweep_kind = parse_choice(v, std::array{SweepKind::count, SweepKind::cofactor,
                                                                   SweepKind::margination, SweepKind::size});
                     },
                     [](const S& s) { return std::string(to_string(s.sweep_kind)); }});
        // Values are parsed as lengths when they carry a length suffix
        // (size sweeps), plain numbers otherwise.
        k.push_back({"sweep.values",
                     [](S& s, auto v) {
                         s.sweep_values = parse_list(v, [](std::string_view x) {
                             std::string_view suffix;
                             parse_number(x, suffix);
                             return suffix.empty() ? parse_quantity(x, no_units()) : parse_quantity(x, length_units());
                         });
                     },
                     [](const S& s) {
                         if (s.sweep_values.empty()) return std::string("default");
                         std::string out;
                         for (double x : s.sweep_values) {
                             out += (out.empty() ? "" : ",") +
                                    (s.sweep_kind == SweepKind::size ? format_length(x) : format_double(x));
                         }
                         return out;
                     }});
        k.push_back({"sweep.variants", [](S& s, auto v) { s.sweep_variants = parse_list(v, parse_variant); },
                     [](const S& s) {
                         if (s.sweep_variants.empty()) return std::string("default");
                         std::string out;
                         for (auto x : s.sweep_variants) out += (out.empty() ? "" : ",") + std::string(to_string(x));
                         return out;
                     }});
        k.push_back({"sweep.vessels", [](S& s, auto v) { s.sweep_vessels = parse_list(v, parse_vessel); },
                     [](const S& s) {
                         if (s.sweep_vessels.empty()) return std::string("default");
                         std::string out;
                         for (auto x : s.sweep_vessels) out += (out.empty() ? "" : ",") + std::string(to_string(x));
                         return out;
                     }});
        k.push_back({"design.vessels", [](S& s, auto v) { s.design_vessels = parse_list(v, parse_vessel); },
                     [](const S& s) {
                         std::string out;
                         for (auto x : s.design_vessels) out += (out.empty() ? "" : ",") + std::string(to_string(x));
                         return out;
                     }});
        k.push_back({"design.radii",
                     [](S& s, auto v) {
                         s.design_radii = parse_list(v, [](std::string_view x) { return parse_quantity(x, length_units()); });
                     },
                     [](const S& s) {
                         std::string out;
                         for (double x : s.design_radii) out += (out.empty() ? "" : ",") + format_length(x);
                         return out;
                     }});
        k.push_back({"design.targets",
                     [](S& s, auto v) {
                         s.design_targets = parse_list(v, [](std::string_view x) {
                             const double t = parse_quantity(x, no_units());
                             if (!(t >= 0.0 && t < 1.0)) throw ConfigError("targets must lie in [0, 1)");
                             return t;
                         });
                     },
                     [](const S& s) {
                         std::string out;
                         for (double x : s.design_targets) out += (out.empty() ? "" : ",") + format_double(x);
                         return out;
                     }});
        k.push_back({"design.tolerance",
                     [](S& s, auto v) {
                         s.design_tolerance = parse_quantity(v, no_units());
                         if (!(s.design_tolerance >= 0.0)) throw ConfigError("must be non-negative");
                     },
                     [](const S& s) { return format_double(s.design_tolerance); }});
        k.push_back({"design.trials", [](S& s, auto v) { s.design_trials = parse_count(v); },
                     [](const S& s) { return std::to_string(s.design_trials); }});
        k.push_back({"design.arteriole_trials", [](S& s, auto v) { s.design_arteriole_trials = parse_count(v); },
                     [](const S& s) { return std::to_string(s.design_arteriole_trials); }});
        k.push_back({"design.max_n", [](S& s, auto v) { s.design_max_n = parse_count(v); },
                     [](const S& s) { return std::to_string(s.design_max_n); }});
        return k;
    }();
    return table;
}

} // namespace detail

/// Sets one dotted key. `where` prefixes error messages (e.g. "run.cfg:12").
inline void apply_setting(Settings& s, std::string_view key, std::string_view value, std::string_view where) {
    const auto prefix = where.empty() ? std::string() : std::string(where) + ": ";
    for (const auto& k : detail::keys()) {
        if (k.name != key) continue;
        try {
            k.set(s, value);
        } catch (const ConfigError& e) {
            throw ConfigError(prefix + std::string(key) + ": " + e.what());
        }
        return;
    }
    throw ConfigError(prefix + "unknown key '" + std::string(key) + "'");
}

/// Applies `KEY=VALUE`, as given on the command line.
inline void apply_override(Settings& s, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("--override: expected KEY=VALUE, got '" + std::string(assignment) + "'");
    }
    apply_setting(s, detail::trim(assignment.substr(0, eq)), detail::trim(assignment.substr(eq + 1)), "--override");
}

inline void parse_config(Settings& s, std::istream& in, std::string_view source) {
    std::string line;
    std::string section;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        const std::string where = std::string(source) + ":" + std::to_string(number);
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = detail::trim(text);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']' || text.size() < 3) throw ConfigError(where + ": malformed section header");
            section = std::string(detail::trim(text.substr(1, text.size() - 2))) + ".";
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        const auto key = detail::trim(text.substr(0, eq));
        const auto value = detail::trim(text.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key");
        if (value.empty()) throw ConfigError(where + ": " + section + std::string(key) + ": missing value");
        apply_setting(s, section + std::string(key), value, where);
    }
}

inline Settings parse_config_text(std::string_view text, std::string_view source = "<string>") {
    Settings s;
    std::istringstream in{std::string(text)};
    parse_config(s, in, source);
    return s;
}

inline Settings load_settings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    Settings s;
    parse_config(s, in, path);
    return s;
}

/// Canonical `key = value` listing of every setting plus derived values.
/// Also the input of the config digest.
inline std::vector<std::pair<std::string, std::string>> describe(const Settings& s) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : detail::keys()) out.emplace_back(std::string(k.name), k.show(s));
    return out;
}

/// Resolved physical parameters of a single run, for `validate`.
inline std::vector<std::pair<std::string, std::string>> describe_resolved(const Settings& s) {
    const TrialConfig c = make_trial_config(s);
    using detail::format_double;
    using detail::format_length;
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("resolved.vessel.diameter", format_length(c.vessel.diameter));
    out.emplace_back("resolved.vessel.length", format_length(c.vessel.length));
    out.emplace_back("resolved.vessel.v_max", format_double(units::in_mm_per_s(c.vessel.v_max)) + "mm_per_s");
    out.emplace_back("resolved.flow.cells", s.flow == FlowKind::laminar_discretized
                                                ? std::to_string(s.cells == 0 ? default_cell_count(c.vessel.kind) : s.cells)
                                                : std::string("n/a"));
    out.emplace_back("resolved.biomarker.diffusivity", format_double(c.biomarker.diffusivity) + "m2_per_s");
    out.emplace_back("resolved.nanomachine.diffusivity", format_double(c.nanomachine.diffusivity) + "m2_per_s");
    out.emplace_back("resolved.nanomachine.cofactor", format_double(c.nanomachine.cofactor));
    out.emplace_back("resolved.release.margination", c.release.strategy == ReleasePlan::Strategy::regions
                                                         ? format_double(c.release.margination)
                                                         : std::string("n/a"));
    out.emplace_back("resolved.release.near_wall_band", format_length(c.release.near_wall.band_thickness(c.vessel)));
    out.emplace_back("resolved.detection.d_det", format_length(c.detection_range));
    out.emplace_back("resolved.sim.t_max", format_double(c.t_max) + "s");
    out.emplace_back("resolved.sim.steps", std::to_string(c.step_budget()));
    return out;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t config_digest(const Settings& s) {
    std::string text;
    for (const auto& [k, v] : describe(s)) text += k + "=" + v + "\n";
    return fnv1a64(text);
}

} // namespace nanoscout
