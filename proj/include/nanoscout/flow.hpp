// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "nanoscout/common.hpp"
#include "nanoscout/vessel.hpp"

namespace nanoscout {

/// Hagen-Poiseuille profile as a function of squared radial distance,
/// clamped to zero in the prism corners outside the inscribed circle.
inline double laminar_profile(double v_max, double radius, double r_squared) {
    return std::max(0.0, v_max * (1.0 - r_squared / (radius * radius)));
}

struct UniformFlow {
    double speed = 0.0;

    double speed_at(double /*y*/, double /*z*/) const { return speed; }
};

struct LaminarFlow {
    double v_max = 0.0;
    double radius = 0.0;

    double speed_at(double y, double z) const { return laminar_profile(v_max, radius, y * y + z * z); }
};

/// Cross-sectional tiling into ny x nz sub-prisms spanning the full axial
/// length. Each cell carries the laminar speed at its center.
class VelocityGrid {
public:
    VelocityGrid() = default;
    VelocityGrid(double height, double width, std::size_t ny, std::size_t nz, std::vector<double> speeds)
        : height_(height), width_(width), ny_(ny), nz_(nz), speeds_(std::move(speeds)) {}

    std::size_t ny() const { return ny_; }
    std::size_t nz() const { return nz_; }
    std::size_t cell_count() const { return ny_ * nz_; }
    double cell_height() const { return height_ / static_cast<double>(ny_); }
    double cell_width() const { return width_ / static_cast<double>(nz_); }
    const std::vector<double>& speeds() const { return speeds_; }

    double speed(std::size_t iy, std::size_t iz) const { return speeds_[iy * nz_ + iz]; }

    /// Center of cell (iy, iz) in domain coordinates (x omitted).
    std::pair<double, double> cell_center(std::size_t iy, std::size_t iz) const {
        return {-0.5 * height_ + (static_cast<double>(iy) + 0.5) * cell_height(),
                -0.5 * width_ + (static_cast<double>(iz) + 0.5) * cell_width()};
    }

    double speed_at(double y, double z) const { return speed(index(y, height_, ny_), index(z, width_, nz_)); }

private:
    static std::size_t index(double c, double extent, std::size_t n) {
        const double t = (c + 0.5 * extent) / extent * static_cast<double>(n);
        if (!(t > 0.0)) return 0;
        return std::min(static_cast<std::size_t>(t), n - 1);
    }

    double height_ = 0.0;
    double width_ = 0.0;
    std::size_t ny_ = 0;
    std::size_t nz_ = 0;
    std::vector<double> speeds_;
};

struct DiscretizedFlow {
    VelocityGrid grid;

    double speed_at(double y, double z) const { return grid.speed_at(y, z); }
};

using FlowModel = std::variant<UniformFlow, LaminarFlow, DiscretizedFlow>;

/// Most-square factorization ny x nz = count with ny <= nz.
inline std::pair<std::size_t, std::size_t> square_factorization(std::size_t count) {
    std::size_t ny = 1;
    for (std::size_t d = 1; d * d <= count; ++d) {
        if (count % d == 0) ny = d;
    }
    return {ny, count / ny};
}

inline VelocityGrid discretize(double v_max, const VesselSpec& vessel, std::size_t cell_count) {
    if (cell_count == 0) throw ArgumentError("discretize: cell_count must be at least 1");
    const auto [ny, nz] = square_factorization(cell_count);
    VelocityGrid shape(vessel.diameter, vessel.diameter, ny, nz, {});
    std::vector<double> speeds(cell_count);
    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const auto [cy, cz] = shape.cell_center(iy, iz);
            speeds[iy * nz + iz] = laminar_profile(v_max, vessel.radius(), cy * cy + cz * cz);
        }
    }
    return {vessel.diameter, vessel.diameter, ny, nz, std::move(speeds)};
}

/// Sub-prism counts used for the named vessels; scaled with diameter.
inline std::size_t default_cell_count(VesselKind kind) {
    switch (kind) {
    case VesselKind::capillary: return 81;
    case VesselKind::venule: return 200;
    case VesselKind::arteriole: return 300;
    case VesselKind::custom: break;
    }
    return 81;
}

enum class FlowKind { uniform, laminar, laminar_discretized };

inline std::string_view to_string(FlowKind kind) {
    switch (kind) {
    case FlowKind::uniform: return "uniform";
    case FlowKind::laminar: return "laminar";
    case FlowKind::laminar_discretized: return "laminar_discretized";
    }
    return "uniform";
}

inline FlowModel make_flow(FlowKind kind, const VesselSpec& vessel, std::size_t cells = 0) {
    switch (kind) {
    case FlowKind::uniform: return UniformFlow{vessel.v_max};
    case FlowKind::laminar: return LaminarFlow{vessel.v_max, vessel.radius()};
    case FlowKind::laminar_discretized:
        return DiscretizedFlow{discretize(vessel.v_max, vessel, cells == 0 ? default_cell_count(vessel.kind) : cells)};
    }
    return UniformFlow{vessel.v_max};
}

/// Axial speed at a position; throws DomainError outside the prism.
inline double velocity_at(const FlowModel& flow, const Vec3& position, const Domain& domain) {
    if (!domain.contains(position)) throw DomainError("velocity_at: position outside the vessel domain");
    return std::visit([&](const auto& f) { return f.speed_at(position.y, position.z); }, flow);
}

/// Cross-sectional mean speed over the inscribed disc. The discretized value
/// averages the cells whose centers lie inside it.
inline double mean_axial_speed(const FlowModel& flow, const VesselSpec& vessel) {
    struct Visitor {
        double r2;
        double operator()(const UniformFlow& f) const { return f.speed; }
        double operator()(const LaminarFlow& f) const { return 0.5 * f.v_max; }
        double operator()(const DiscretizedFlow& f) const {
            double sum = 0.0;
            std::size_t inside = 0;
            for (std::size_t iy = 0; iy < f.grid.ny(); ++iy) {
                for (std::size_t iz = 0; iz < f.grid.nz(); ++iz) {
                    const auto [cy, cz] = f.grid.cell_center(iy, iz);
                    if (cy * cy + cz * cz > r2) continue;
                    sum += f.grid.speed(iy, iz);
                    ++inside;
                }
            }
            return inside == 0 ? 0.0 : sum / static_cast<double>(inside);
        }
    };
    return std::visit(Visitor{vessel.radius() * vessel.radius()}, flow);
}

inline double peak_axial_speed(const FlowModel& flow) {
    struct Visitor {
        double operator()(const UniformFlow& f) const { return f.speed; }
        double operator()(const LaminarFlow& f) const { return f.v_max; }
        double operator()(const DiscretizedFlow& f) const {
            const auto& s = f.grid.speeds();
            return s.empty() ? 0.0 : *std::max_element(s.begin(), s.end());
        }
    };
    return std::visit(Visitor{}, flow);
}

} // namespace nanoscout
