// Copyright 2026 the svdpd developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace svdpd {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

/// Read/write 3-vectors stored in a flat [x0,y0,z0,x1,...] array.
inline Vec3 vec_at(const std::vector<double>& v, std::size_t i) {
    return {v[3 * i], v[3 * i + 1], v[3 * i + 2]};
}

inline void set_vec(std::vector<double>& v, std::size_t i, const Vec3& a) {
    v[3 * i] = a.x;
    v[3 * i + 1] = a.y;
    v[3 * i + 2] = a.z;
}

inline void add_vec(std::vector<double>& v, std::size_t i, const Vec3& a) {
    v[3 * i] += a.x;
    v[3 * i + 1] += a.y;
    v[3 * i + 2] += a.z;
}

inline void sub_vec(std::vector<double>& v, std::size_t i, const Vec3& a) {
    v[3 * i] -= a.x;
    v[3 * i + 1] -= a.y;
    v[3 * i + 2] -= a.z;
}

} // namespace svdpd
