// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace nanoscout {

using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

/// Seed of trial `index` within a batch: mix64(master + (index + 1) * gamma).
constexpr std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed + (index + 1) * golden_gamma);
}

/// Independent sub-streams of one trial. Keeping biomarker draws apart from
/// nanomachine draws means two configurations that differ only in the
/// nanomachine population see identical biomarker trajectories.
enum class Stream : std::uint64_t {
    biomarker_release = 1,
    nanomachine_release = 2,
    biomarker_motion = 3,
    nanomachine_motion = 4,
};

inline RandomStream make_stream(std::uint64_t seed, Stream which) {
    return RandomStream(mix64(seed ^ mix64(static_cast<std::uint64_t>(which) * golden_gamma)));
}

} // namespace nanoscout
