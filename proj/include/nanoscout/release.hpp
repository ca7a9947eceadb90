// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nanoscout/common.hpp"
#include "nanoscout/kinetics.hpp"
#include "nanoscout/vessel.hpp"

namespace nanoscout {

struct PointLayout {
    std::array<Vec3, 3> biomarker{};
    std::array<Vec3, 3> nanomachine{};
};

inline constexpr double same_species_spacing_min = units::um(15.0);
inline constexpr double same_species_spacing_max = units::um(20.0);
inline constexpr double cross_species_spacing_min = units::um(10.0);
inline constexpr double cross_species_spacing_max = units::um(15.0);

/// Throws ConfigError unless consecutive same-species points are 15-20 um
/// apart and every biomarker point is 10-15 um from its nearest nanomachine
/// point.
inline void validate_layout(const PointLayout& layout) {
    constexpr double slack = 1e-12;
    const auto within = [](double d, double lo, double hi) { return d >= lo - slack && d <= hi + slack; };
    for (const auto* pts : {&layout.biomarker, &layout.nanomachine}) {
        for (std::size_t i = 0; i + 1 < pts->size(); ++i) {
            if (!within(norm((*pts)[i + 1] - (*pts)[i]), same_species_spacing_min, same_species_spacing_max)) {
                throw ConfigError("release: same-species release points must be 15-20 um apart");
            }
        }
    }
    for (const auto& b : layout.biomarker) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& n : layout.nanomachine) nearest = std::min(nearest, norm(b - n));
        if (!within(nearest, cross_species_spacing_min, cross_species_spacing_max)) {
            throw ConfigError("release: each biomarker point must be 10-15 um from the nearest nanomachine point");
        }
    }
}

/// Where region releases put biomarkers: on the centerline at a random
/// axial offset, or uniformly over the slab cross-section.
enum class BiomarkerPlacement { centerline, cross_section };

inline std::string_view to_string(BiomarkerPlacement p) {
    return p == BiomarkerPlacement::centerline ? "centerline" : "cross_section";
}

struct ReleasePlan {
    enum class Strategy { points, regions };

    Strategy strategy = Strategy::regions;
    PointLayout points{};
    double margination = 0.0;  // near-wall share of nanomachines for regions
    double jitter = 0.0;       // m, radius of the uniform ball around each point
    double slab_fraction = 0.1; // axial extent of the region release, as a fraction of L
    NearWallRule near_wall{};
    BiomarkerPlacement biomarkers = BiomarkerPlacement::centerline;

    void validate(const VesselSpec& vessel) const {
        if (!(jitter >= 0.0)) throw ConfigError("release.jitter: must be non-negative");
        if (strategy == Strategy::regions) {
            if (!(margination >= 0.0 && margination <= 1.0)) {
                throw ConfigError("release.margination: must lie in [0, 1]");
            }
            if (!(slab_fraction > 0.0 && slab_fraction <= 1.0)) {
                throw ConfigError("release.slab: must lie in (0, 1]");
            }
            return;
        }
        validate_layout(points);
        const Domain domain = Domain::from(vessel);
        for (const auto* pts : {&points.biomarker, &points.nanomachine}) {
            for (const auto& p : *pts) {
                if (!domain.strictly_contains(p)) throw ConfigError("release: point lies outside the vessel");
            }
        }
    }
};

inline std::string_view to_string(ReleasePlan::Strategy s) {
    return s == ReleasePlan::Strategy::points ? "points" : "regions";
}

inline constexpr double min_points_vessel_length = units::um(60.0);

/// Interleaved centerline layout B N B N B N, 10 um apart, starting at 0.1 L.
/// Biomarkers sit upstream of the nanomachine points so the flow carries them
/// toward the nanomachines.
inline ReleasePlan default_points(const VesselSpec& vessel) {
    if (vessel.length < min_points_vessel_length) {
        throw ConfigError("release: vessel shorter than 60 um cannot host the three-point layout");
    }
    ReleasePlan plan;
    plan.strategy = ReleasePlan::Strategy::points;
    const double start_um = units::in_um(0.1 * vessel.length);
    for (std::size_t i = 0; i < 3; ++i) {
        const double offset = 20.0 * static_cast<double>(i);
        plan.points.biomarker[i] = {units::um(start_um + offset), 0.0, 0.0};
        plan.points.nanomachine[i] = {units::um(start_um + offset + 10.0), 0.0, 0.0};
    }
    plan.validate(vessel);
    return plan;
}

/// Number of particles placed in the near-wall band: round-half-up of M * count.
inline std::size_t marginated_count(double margination, std::size_t count) {
    return static_cast<std::size_t>(std::floor(margination * static_cast<double>(count) + 0.5));
}

namespace detail {

template <class Rng>
Vec3 uniform_cross_section(double x, const Domain& domain, Rng& rng) {
    std::uniform_real_distribution<double> ys(-domain.half_height(), domain.half_height());
    std::uniform_real_distribution<double> zs(-domain.half_width(), domain.half_width());
    for (;;) {
        const Vec3 p{x, ys(rng), zs(rng)};
        if (domain.strictly_contains(p)) return p;
    }
}

template <class Rng>
Vec3 uniform_near_wall(double x, const Domain& domain, double band, Rng& rng) {
    for (;;) {
        const Vec3 p = uniform_cross_section(x, domain, rng);
        if (domain.lateral_wall_distance(p) <= band) return p;
    }
}

template <class Rng>
double uniform_axial(double extent, Rng& rng) {
    std::uniform_real_distribution<double> xs(0.0, extent);
    for (;;) {
        const double x = xs(rng);
        if (x > 0.0) return x;
    }
}

} // namespace detail

/// Initial positions for `count` particles of `species`.
template <class Rng>
std::vector<Vec3> sample_initial_positions(const ReleasePlan& plan, const SpeciesSpec& species, std::size_t count,
                                           const VesselSpec& vessel, Rng& rng) {
    const Domain domain = Domain::from(vessel);
    std::vector<Vec3> out;
    out.reserve(count);
    if (plan.strategy == ReleasePlan::Strategy::points) {
        const auto& anchors = species.role == Role::biomarker ? plan.points.biomarker : plan.points.nanomachine;
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (std::size_t i = 0; i < count; ++i) {
            const Vec3 anchor = anchors[i % anchors.size()];
            if (plan.jitter <= 0.0) {
                out.push_back(anchor);
                continue;
            }
            for (;;) {
                const Vec3 u{unit(rng), unit(rng), unit(rng)};
                if (squared_norm(u) > 1.0) continue;
                const Vec3 p = anchor + plan.jitter * u;
                if (domain.strictly_contains(p)) {
                    out.push_back(p);
                    break;
                }
            }
        }
        return out;
    }

    const double slab = plan.slab_fraction * vessel.length;
    const std::size_t near_wall =
        species.role == Role::nanomachine ? std::min(marginated_count(plan.margination, count), count) : 0;
    const double band = plan.near_wall.band_thickness(vessel);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = detail::uniform_axial(slab, rng);
        if (species.role == Role::biomarker && plan.biomarkers == BiomarkerPlacement::centerline) {
            out.push_back({x, 0.0, 0.0});
            continue;
        }
        out.push_back(i < near_wall ? detail::uniform_near_wall(x, domain, band, rng)
                                    : detail::uniform_cross_section(x, domain, rng));
    }
    return out;
}

/// Share of positions that lie in the near-wall band.
inline double realized_margination(const std::vector<Vec3>& positions, const VesselSpec& vessel,
                                   const NearWallRule& rule = {}) {
    if (positions.empty()) throw ArgumentError("realized_margination: empty position list");
    const auto hits = std::count_if(positions.begin(), positions.end(), [&](const Vec3& p) {
        return classify_region(p, vessel, rule) == RegionLabel::near_wall;
    });
    return static_cast<double>(hits) / static_cast<double>(positions.size());
}

} // namespace nanoscout
