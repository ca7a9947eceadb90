// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nanoscout/cell_index.hpp"
#include "nanoscout/detection.hpp"

namespace ns = nanoscout;

TEST(DetectPairs, Boundaries) {
    const double d = 1.025e-6;
    EXPECT_EQ(ns::detect_pairs({{1e-6, 0, 0}}, {{1e-6, 0, 0}}, d).size(), 1u);
    EXPECT_EQ(ns::detect_pairs({{0, 0, 0}}, {{d, 0, 0}}, d).size(), 1u);
    EXPECT_TRUE(ns::detect_pairs({{0, 0, 0}}, {{d * (1 + 1e-6), 0, 0}}, d).empty());
}

TEST(DetectPairs, LowestIdWinsAndBiomarkerOnce) {
    const std::vector<ns::Vec3> nanos{{5, 0, 0}, {0.1, 0, 0}, {0, 0.1, 0}};
    const std::vector<ns::Vec3> bios{{0, 0, 0}, {9, 9, 9}, {5.05, 0, 0}};
    const auto pairs = ns::detect_pairs(nanos, bios, 0.5);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0], (ns::DetectionPair{1, 0}));
    EXPECT_EQ(pairs[1], (ns::DetectionPair{0, 2}));
}

TEST(Boundaries, LateralReflection) {
    const ns::Domain d{90e-6, 9e-6, 9e-6};
    const double eps = 1e-8;
    const auto r = ns::apply_boundaries({10e-6, 4.4e-6, 0}, {10e-6, 4.5e-6 + eps, 0}, d);
    EXPECT_EQ(r.status, ns::ParticleStatus::active);
    EXPECT_NEAR(r.position.y, 4.5e-6 - eps, 1e-18);
    const auto s = ns::apply_boundaries({10e-6, 0, -4.4e-6}, {10e-6, 0, -4.5e-6 - eps}, d);
    EXPECT_NEAR(s.position.z, -4.5e-6 + eps, 1e-18);
}

TEST(Boundaries, RepeatedReflectionStaysInside) {
    const ns::Domain d{90e-6, 9e-6, 9e-6};
    const auto r = ns::apply_boundaries({10e-6, 0, 0}, {10e-6, 4.5e-6 + 9e-6 + 1e-7, 0}, d);
    EXPECT_LE(std::abs(r.position.y), 4.5e-6);
    EXPECT_NEAR(r.position.y, -4.5e-6 + 1e-7, 1e-15);
}

TEST(Boundaries, AxialFacesAbsorbAtCrossing) {
    const ns::Domain d{90e-6, 9e-6, 9e-6};
    const auto out = ns::apply_boundaries({89e-6, 0, 0}, {91e-6, 2e-6, 0}, d);
    EXPECT_EQ(out.status, ns::ParticleStatus::exited);
    EXPECT_EQ(out.position.x, 90e-6);
    EXPECT_NEAR(out.position.y, 1e-6, 1e-15);
    const auto back = ns::apply_boundaries({1e-6, 0, 0}, {-1e-6, 0, 0}, d);
    EXPECT_EQ(back.status, ns::ParticleStatus::exited);
    EXPECT_EQ(back.position.x, 0.0);
}

TEST(Boundaries, InsideUnchanged) {
    const ns::Domain d{90e-6, 9e-6, 9e-6};
    const ns::Vec3 p{30e-6, 1e-6, -2e-6};
    const auto r = ns::apply_boundaries({29e-6, 1e-6, -2e-6}, p, d);
    EXPECT_EQ(r.position, p);
    EXPECT_EQ(r.status, ns::ParticleStatus::active);
}

namespace {
// Wilson interval as the roots of (p - phat)^2 = z^2 p (1 - p) / n.
std::pair<double, double> wilson_roots(double k, double n, double z) {
    const double phat = k / n;
    const double a = 1 + z * z / n;
    const double b = -(2 * phat + z * z / n);
    const double c = phat * phat;
    const double disc = std::sqrt(b * b - 4 * a * c);
    return {(-b - disc) / (2 * a), (-b + disc) / (2 * a)};
}
} // namespace

TEST(Wilson, MatchesQuadraticRoots) {
    for (auto [k, n] : std::vector<std::pair<int, int>>{{150, 300}, {1, 300}, {299, 300}, {37, 60}, {5, 9}}) {
        const auto e = ns::wilson_estimate(k, n, 1);
        const auto [lo, hi] = wilson_roots(k, n, 1.959963984540054);
        EXPECT_NEAR(e.ci_low, lo, 1e-12);
        EXPECT_NEAR(e.ci_high, hi, 1e-12);
        EXPECT_LE(e.ci_low, e.p_d);
        EXPECT_GE(e.ci_high, e.p_d);
    }
}

TEST(Wilson, Extremes) {
    const auto none = ns::wilson_estimate(0, 300, 100);
    EXPECT_EQ(none.p_d, 0.0);
    EXPECT_EQ(none.ci_low, 0.0);
    EXPECT_GT(none.ci_high, 0.0);
    const auto all = ns::wilson_estimate(300, 300, 100);
    EXPECT_EQ(all.p_d, 1.0);
    EXPECT_EQ(all.ci_high, 1.0);
    EXPECT_EQ(ns::wilson_estimate(150, 300, 100).p_d, 0.5);
}

TEST(CellIndex, AgreesWithBruteForce) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-10e-6, 10e-6), x(0, 60e-6);
    for (int round = 0; round < 50; ++round) {
        std::vector<ns::Vec3> pts;
        for (int i = 0; i < 300; ++i) pts.push_back({x(rng), u(rng), u(rng)});
        std::vector<std::uint32_t> ids;
        for (std::uint32_t i = 0; i < pts.size(); i += 1 + (i % 3)) ids.push_back(i);
        const double r = 2e-6;
        ns::CellIndex index(r);
        index.build(pts, ids);
        for (int q = 0; q < 100; ++q) {
            const ns::Vec3 p{x(rng), u(rng), u(rng)};
            std::uint32_t expect = ns::CellIndex::npos;
            for (auto id : ids) {
                if (ns::squared_distance(pts[id], p) <= r * r) {
                    expect = std::min(expect, id);
                }
            }
            EXPECT_EQ(index.lowest_within(pts, p, r), expect);
        }
    }
}
