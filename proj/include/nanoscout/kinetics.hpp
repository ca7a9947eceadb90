// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "nanoscout/common.hpp"
#include "nanoscout/flow.hpp"

namespace nanoscout {

/// Stokes-Einstein diffusivity of a sphere: kB T / (6 pi mu a).
inline double diffusion_coefficient(double radius, double temperature, double viscosity) {
    if (!(radius > 0.0) || !(temperature > 0.0) || !(viscosity > 0.0)) {
        throw ArgumentError("diffusion_coefficient: radius, temperature and viscosity must be positive");
    }
    return constants::boltzmann * temperature / (6.0 * constants::pi * viscosity * radius);
}

/// Advection cofactor of a nanomachine normalized by the biomarker radius.
inline double velocity_cofactor(double nanomachine_radius, double biomarker_radius) {
    if (!(biomarker_radius > 0.0)) throw ArgumentError("velocity_cofactor: biomarker radius must be positive");
    if (!(nanomachine_radius >= biomarker_radius)) {
        throw ArgumentError("velocity_cofactor: nanomachine radius below biomarker radius gives a cofactor above 1");
    }
    return biomarker_radius / nanomachine_radius;
}

inline constexpr double margination_at_smallest = 0.05;
inline constexpr double margination_at_largest = 0.60;

/// Margination ratio interpolated linearly in radius between the smallest
/// (0.05) and largest (0.60) nanomachines of the studied range.
inline double margination_for_size(double radius, double radius_min, double radius_max) {
    if (!(radius_min < radius_max)) throw ArgumentError("margination_for_size: empty radius range");
    if (radius < radius_min || radius > radius_max) {
        throw ArgumentError("margination_for_size: radius outside [radius_min, radius_max]");
    }
    const double t = (radius - radius_min) / (radius_max - radius_min);
    return margination_at_smallest + (margination_at_largest - margination_at_smallest) * t;
}

enum class Role { biomarker, nanomachine };

inline std::string_view to_string(Role role) { return role == Role::biomarker ? "biomarker" : "nanomachine"; }

struct SpeciesSpec {
    Role role = Role::biomarker;
    double radius = 0.0;      // m
    double cofactor = 1.0;    // alpha_v in [0, 1]
    double diffusivity = 0.0; // m^2/s
    double temperature = 310.0;
    double viscosity = 4e-3;

    void validate() const {
        if (!(radius > 0.0)) throw ConfigError(std::string(to_string(role)) + ": radius must be positive");
        if (!(cofactor >= 0.0 && cofactor <= 1.0)) {
            throw ConfigError(std::string(to_string(role)) + ": velocity cofactor must lie in [0, 1]");
        }
        if (role == Role::biomarker && cofactor != 1.0) {
            throw ConfigError("biomarker: velocity cofactor is fixed at 1");
        }
        if (!(diffusivity >= 0.0)) throw ConfigError(std::string(to_string(role)) + ": negative diffusivity");
    }
};

inline constexpr double default_temperature = 310.0;  // K
inline constexpr double default_viscosity = 4e-3;     // Pa s
inline constexpr double default_biomarker_radius = units::nm(25.0);
inline constexpr double default_nanomachine_radius = units::nm(1000.0);
inline constexpr double smallest_nanomachine_radius = units::nm(100.0);
inline constexpr double largest_nanomachine_radius = units::nm(2000.0);

inline SpeciesSpec make_biomarker(double radius = default_biomarker_radius, double temperature = default_temperature,
                                  double viscosity = default_viscosity) {
    return {Role::biomarker, radius, 1.0, diffusion_coefficient(radius, temperature, viscosity), temperature,
            viscosity};
}

inline SpeciesSpec make_nanomachine(double radius, double cofactor, double temperature = default_temperature,
                                    double viscosity = default_viscosity) {
    return {Role::nanomachine, radius, cofactor, diffusion_coefficient(radius, temperature, viscosity), temperature,
            viscosity};
}

struct KineticParams {
    double dt = 1e-4; // s
    double boltzmann = constants::boltzmann;
};

/// Euler-Maruyama update for one species in a fixed flow: advection by
/// cofactor * local speed (sampled at the start of the step) plus an
/// isotropic Gaussian kick of per-axis standard deviation sqrt(2 D dt).
template <class Flow>
class Mover {
public:
    Mover(const Flow& flow, const SpeciesSpec& species, const KineticParams& params)
        : flow_(&flow),
          advect_(species.cofactor * params.dt),
          kick_(0.0, std::sqrt(2.0 * species.diffusivity * params.dt)),
          diffusing_(species.diffusivity > 0.0) {}

    template <class Rng>
    Vec3 operator()(const Vec3& p, Rng& rng) {
        Vec3 next = p;
        next.x += advect_ * flow_->speed_at(p.y, p.z);
        if (diffusing_) {
            next.x += kick_(rng);
            next.y += kick_(rng);
            next.z += kick_(rng);
        }
        return next;
    }

private:
    const Flow* flow_;
    double advect_;
    std::normal_distribution<double> kick_;
    bool diffusing_;
};

/// Single raw step of one particle. Boundary handling is left to the caller.
template <class Rng>
Vec3 step(const Vec3& position, const SpeciesSpec& species, const FlowModel& flow, const KineticParams& params,
          Rng& rng) {
    return std::visit([&](const auto& f) { return Mover(f, species, params)(position, rng); }, flow);
}

} // namespace nanoscout
