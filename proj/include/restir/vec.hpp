// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace restir {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    explicit Vec3(double s) : x(s), y(s), z(s) {}

    Vec3 operator+(const Vec3 &b) const { return {x + b.x, y + b.y, z + b.z}; }
    Vec3 operator-(const Vec3 &b) const { return {x - b.x, y - b.y, z - b.z}; }
    Vec3 operator*(const Vec3 &b) const { return {x * b.x, y * b.y, z * b.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 &operator+=(const Vec3 &b) { x += b.x; y += b.y; z += b.z; return *this; }
    Vec3 &operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3 &b) const { return x == b.x && y == b.y && z == b.z; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }

inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double length_squared(const Vec3 &v) { return dot(v, v); }
inline double length(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalize(const Vec3 &v) { return v / length(v); }

inline bool is_finite(const Vec3 &v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline double max_component(const Vec3 &v) { return std::fmax(v.x, std::fmax(v.y, v.z)); }

/// Rec. 709 luminance of a linear RGB color.
inline double luminance(const Vec3 &c) {
    return 0.2126 * c.x + 0.7152 * c.y + 0.0722 * c.z;
}

/// Orthonormal basis around a unit vector n (n becomes the local z axis).
struct Frame {
    Vec3 t, b, n;

    explicit Frame(const Vec3 &n_) : n(n_) {
        // branchless Duff et al. construction
        double sign = std::copysign(1.0, n.z);
        double a = -1.0 / (sign + n.z);
        double c = n.x * n.y * a;
        t = Vec3(1.0 + sign * n.x * n.x * a, sign * c, -sign * n.x);
        b = Vec3(c, sign + n.y * n.y * a, -n.y);
    }

    Vec3 to_world(const Vec3 &v) const { return t * v.x + b * v.y + n * v.z; }
    Vec3 to_local(const Vec3 &v) const { return {dot(v, t), dot(v, b), dot(v, n)}; }
};

} // namespace restir
