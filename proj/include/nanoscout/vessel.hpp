// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "nanoscout/common.hpp"

namespace nanoscout {

enum class VesselKind { capillary, venule, arteriole, custom };

inline std::string_view to_string(VesselKind kind) {
    switch (kind) {
    case VesselKind::capillary: return "capillary";
    case VesselKind::venule: return "venule";
    case VesselKind::arteriole: return "arteriole";
    case VesselKind::custom: return "custom";
    }
    return "custom";
}

inline std::optional<VesselKind> parse_vessel_kind(std::string_view name) {
    for (auto kind : {VesselKind::capillary, VesselKind::venule, VesselKind::arteriole, VesselKind::custom}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

/// One straight microvessel segment. Strict SI units throughout.
struct VesselSpec {
    VesselKind kind = VesselKind::custom;
    double diameter = 0.0; // m
    double length = 0.0;   // m
    double v_max = 0.0;    // m/s, centerline speed

    double radius() const { return 0.5 * diameter; }

    void validate() const {
        if (!(diameter > 0.0) || !(length > 0.0) || !(v_max > 0.0)) {
            throw ConfigError("vessel: diameter, length and v_max must all be positive");
        }
    }
};

/// Representative vessels: tabulated diameters, length ten diameters,
/// one peak velocity picked from each tabulated range.
inline VesselSpec preset(VesselKind kind) {
    switch (kind) {
    case VesselKind::capillary: return {kind, units::um(9.0), units::um(90.0), units::mm_per_s(1.0)};
    case VesselKind::venule: return {kind, units::um(20.0), units::um(200.0), units::mm_per_s(2.0)};
    case VesselKind::arteriole: return {kind, units::um(30.0), units::um(300.0), units::mm_per_s(3.0)};
    case VesselKind::custom: break;
    }
    throw ArgumentError("preset: custom vessels have no preset dimensions");
}

struct SpeedRange {
    double low;
    double high;
};

/// Tabulated peak-velocity range for a named vessel kind.
inline SpeedRange preset_speed_range(VesselKind kind) {
    switch (kind) {
    case VesselKind::capillary: return {units::mm_per_s(0.5), units::mm_per_s(1.5)};
    case VesselKind::venule: return {units::mm_per_s(1.0), units::mm_per_s(3.0)};
    case VesselKind::arteriole: return {units::mm_per_s(1.0), units::mm_per_s(100.0)};
    case VesselKind::custom: break;
    }
    throw ArgumentError("preset_speed_range: custom vessels have no tabulated range");
}

/// Rectangular prism of extent L x H x W. The axial direction is x in
/// [0, L]; the cross-section is centered on the centerline (y, z) = (0, 0).
struct Domain {
    double length = 0.0;
    double height = 0.0; // y extent
    double width = 0.0;  // z extent

    static Domain from(const VesselSpec& vessel) { return {vessel.length, vessel.diameter, vessel.diameter}; }

    double half_height() const { return 0.5 * height; }
    double half_width() const { return 0.5 * width; }

    bool contains(const Vec3& p) const {
        return p.x >= 0.0 && p.x <= length && std::abs(p.y) <= half_height() && std::abs(p.z) <= half_width();
    }
    bool strictly_contains(const Vec3& p) const {
        return p.x > 0.0 && p.x < length && std::abs(p.y) < half_height() && std::abs(p.z) < half_width();
    }
    /// Distance to the nearest lateral (non-axial) face; negative outside.
    double lateral_wall_distance(const Vec3& p) const {
        return std::min(half_height() - std::abs(p.y), half_width() - std::abs(p.z));
    }
};

/// Distance from the axial centerline, measured in the cross-sectional plane.
inline double radial_distance(const Vec3& position, const Domain& /*domain*/) {
    return std::hypot(position.y, position.z);
}

enum class RegionLabel { core, near_wall, outside };

inline std::string_view to_string(RegionLabel label) {
    switch (label) {
    case RegionLabel::core: return "core";
    case RegionLabel::near_wall: return "near_wall";
    case RegionLabel::outside: return "outside";
    }
    return "outside";
}

/// How the near-wall band is sized. `thickness` uses delta = fraction * D.
/// `area_fraction` picks delta so the band covers `fraction` of the square
/// cross-section.
struct NearWallRule {
    enum class Mode { thickness, area_fraction };
    Mode mode = Mode::thickness;
    double fraction = 0.1;

    double band_thickness(const VesselSpec& vessel) const {
        if (mode == Mode::thickness) return fraction * vessel.diameter;
        return 0.5 * vessel.diameter * (1.0 - std::sqrt(1.0 - fraction));
    }
    /// Fraction of the square cross-section lying inside the band.
    double band_area_fraction(const VesselSpec& vessel) const {
        const double inner = 1.0 - 2.0 * band_thickness(vessel) / vessel.diameter;
        return 1.0 - std::max(inner, 0.0) * std::max(inner, 0.0);
    }
};

inline RegionLabel classify_region(const Vec3& position, const VesselSpec& vessel, const NearWallRule& rule = {}) {
    const Domain domain = Domain::from(vessel);
    if (!domain.contains(position)) return RegionLabel::outside;
    return domain.lateral_wall_distance(position) <= rule.band_thickness(vessel) ? RegionLabel::near_wall
                                                                                 : RegionLabel::core;
}

} // namespace nanoscout
