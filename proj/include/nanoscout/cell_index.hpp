// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "nanoscout/common.hpp"

namespace nanoscout {

/// Uniform-grid neighbor index over a point set. Cells have edge length
/// `cell_size`; a radius query with radius <= cell_size only needs the 27
/// cells around the query point. Built by sorting (cell key, id) pairs so a
/// rebuild costs O(n log n) with no per-cell allocation.
class CellIndex {
public:
    explicit CellIndex(double cell_size) : inv_cell_(1.0 / cell_size), cell_size_(cell_size) {}

    double cell_size() const { return cell_size_; }

    /// Indexes `points[ids[k]]` for every k. Ids are kept for queries.
    void build(std::span<const Vec3> points, std::span<const std::uint32_t> ids) {
        entries_.clear();
        entries_.reserve(ids.size());
        for (auto id : ids) entries_.push_back({key(cell_of(points[id])), id});
        std::sort(entries_.begin(), entries_.end());
    }

    /// Smallest id whose point lies within `radius` of `q`, or npos.
    /// Requires radius <= cell_size.
    std::uint32_t lowest_within(std::span<const Vec3> points, const Vec3& q, double radius) const {
        const double r2 = radius * radius;
        const Cell c = cell_of(q);
        std::uint32_t best = npos;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    const std::uint64_t k = key({c.x + dx, c.y + dy, c.z + dz});
                    auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{k, 0});
                    for (; it != entries_.end() && it->key == k; ++it) {
                        if (it->id < best && squared_distance(points[it->id], q) <= r2) best = it->id;
                    }
                }
            }
        }
        return best;
    }

    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

private:
    struct Cell {
        std::int64_t x, y, z;
    };
    struct Entry {
        std::uint64_t key;
        std::uint32_t id;
        friend bool operator<(const Entry& a, const Entry& b) {
            return a.key != b.key ? a.key < b.key : a.id < b.id;
        }
    };

    Cell cell_of(const Vec3& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x * inv_cell_)),
                static_cast<std::int64_t>(std::floor(p.y * inv_cell_)),
                static_cast<std::int64_t>(std::floor(p.z * inv_cell_))};
    }

    // 21 bits per axis, offset so that small negative cells stay distinct.
    static std::uint64_t key(const Cell& c) {
        constexpr std::int64_t offset = 1 << 20;
        constexpr std::uint64_t mask = (1u << 21) - 1;
        return ((static_cast<std::uint64_t>(c.x + offset) & mask) << 42) |
               ((static_cast<std::uint64_t>(c.y + offset) & mask) << 21) |
               (static_cast<std::uint64_t>(c.z + offset) & mask);
    }

    double inv_cell_;
    double cell_size_;
    std::vector<Entry> entries_;
};

} // namespace nanoscout
