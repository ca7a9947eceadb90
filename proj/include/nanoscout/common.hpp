// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nanoscout {

/// Raised when inputs violate a documented constraint (bad key, unit
/// mismatch, inconsistent trial setup). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by a function whose numeric argument is out of its domain.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a position is queried outside the simulation domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

namespace constants {
inline constexpr double boltzmann = 1.380649e-23; // J/K, exact SI value
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

namespace units {
// Conversions divide by an exact power of ten, which rounds once: 25 nm is
// bit-identical to the literal 25e-9.
constexpr double nm(double v) { return v / 1e9; }
constexpr double um(double v) { return v / 1e6; }
constexpr double mm(double v) { return v / 1e3; }
constexpr double mm_per_s(double v) { return v / 1e3; }
constexpr double in_nm(double m) { return m * 1e9; }
constexpr double in_um(double m) { return m * 1e6; }
constexpr double in_mm_per_s(double v) { return v * 1e3; }
} // namespace units

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr double squared_norm(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(squared_norm(v)); }
constexpr double squared_distance(const Vec3& a, const Vec3& b) { return squared_norm(a - b); }

} // namespace nanoscout
