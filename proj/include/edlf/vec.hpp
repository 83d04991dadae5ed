#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace edlf {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](std::size_t i) { return (&x)[i]; }
    double operator[](std::size_t i) const { return (&x)[i]; }

    bool operator==(const Vec3&) const = default;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {x * c, y * c, z * c}; }
    Vec3 operator/(double c) const { return {x / c, y / c, z / c}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    Vec3& operator*=(double c) {
        x *= c;
        y *= c;
        z *= c;
        return *this;
    }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm_sq(v)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Embedded cone point u = (sqrt(k-1)*s, w) in R^4.
struct Vec4 {
    double t = 0.0, x = 0.0, y = 0.0, z = 0.0;

    double& operator[](std::size_t i) { return (&t)[i]; }
    double operator[](std::size_t i) const { return (&t)[i]; }

    bool operator==(const Vec4&) const = default;

    Vec4 operator+(const Vec4& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    Vec4 operator-(const Vec4& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    Vec4 operator*(double c) const { return {t * c, x * c, y * c, z * c}; }
};

inline double dot(const Vec4& a, const Vec4& b) {
    return a.t * b.t + a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double norm_sq(const Vec4& v) { return dot(v, v); }
inline double norm(const Vec4& v) { return std::sqrt(norm_sq(v)); }

}  // namespace edlf
