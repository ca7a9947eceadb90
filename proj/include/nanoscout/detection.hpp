// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "nanoscout/common.hpp"
#include "nanoscout/vessel.hpp"

namespace nanoscout {

struct DetectionPair {
    std::size_t nanomachine;
    std::size_t biomarker;
    friend bool operator==(const DetectionPair&, const DetectionPair&) = default;
};

/// Every biomarker within `range` of some nanomachine, paired with the
/// lowest-id such nanomachine. Output is ordered by biomarker id.
inline std::vector<DetectionPair> detect_pairs(const std::vector<Vec3>& nanomachines,
                                               const std::vector<Vec3>& biomarkers, double range) {
    std::vector<DetectionPair> out;
    const double r2 = range * range;
    for (std::size_t b = 0; b < biomarkers.size(); ++b) {
        for (std::size_t n = 0; n < nanomachines.size(); ++n) {
            if (squared_distance(nanomachines[n], biomarkers[b]) <= r2) {
                out.push_back({n, b});
                break;
            }
        }
    }
    return out;
}

enum class ParticleStatus : std::uint8_t { active, exited, detected };

struct BoundaryResult {
    Vec3 position;
    ParticleStatus status;
};

namespace detail {
/// Folds c back into [-h, h] by repeated mirror reflection.
inline double reflect_into(double c, double h) {
    while (c > h || c < -h) c = c > h ? 2.0 * h - c : -2.0 * h - c;
    return c;
}
} // namespace detail

/// Specular reflection off the lateral faces; crossing either axial face
/// absorbs the particle at the crossing point.
inline BoundaryResult apply_boundaries(const Vec3& before, const Vec3& after, const Domain& domain) {
    if (after.x < 0.0 || after.x > domain.length) {
        const double face = after.x < 0.0 ? 0.0 : domain.length;
        const double span = after.x - before.x;
        const double t = span != 0.0 ? std::clamp((face - before.x) / span, 0.0, 1.0) : 0.0;
        Vec3 hit = before + t * (after - before);
        hit.x = face;
        hit.y = detail::reflect_into(hit.y, domain.half_height());
        hit.z = detail::reflect_into(hit.z, domain.half_width());
        return {hit, ParticleStatus::exited};
    }
    return {{after.x, detail::reflect_into(after.y, domain.half_height()),
             detail::reflect_into(after.z, domain.half_width())},
            ParticleStatus::active};
}

/// Pooled detection probability with a 95% Wilson score interval.
struct BatchEstimate {
    double p_d = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t trials = 0;
    std::size_t detected = 0;
    std::size_t total = 0;

    double half_width() const { return 0.5 * (ci_high - ci_low); }
};

inline constexpr double wilson_z95 = 1.959963984540054;

inline BatchEstimate wilson_estimate(std::size_t detected, std::size_t total, std::size_t trials,
                                     double z = wilson_z95) {
    BatchEstimate e;
    e.trials = trials;
    e.detected = detected;
    e.total = total;
    if (total == 0) {
        e.ci_high = 1.0;
        return e;
    }
    const double n = static_cast<double>(total);
    const double p = static_cast<double>(detected) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    e.p_d = p;
    e.ci_low = detected == 0 ? 0.0 : std::clamp(center - half, 0.0, p);
    e.ci_high = detected == total ? 1.0 : std::clamp(center + half, p, 1.0);
    return e;
}

} // namespace nanoscout
