#ifndef DECWAVE_GEOMETRY_HPP
#define DECWAVE_GEOMETRY_HPP

#include <cmath>

namespace decwave {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double norm_squared(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
constexpr Vec3 midpoint(const Vec3& a, const Vec3& b) { return (a + b) * 0.5; }

inline Vec3 normalized(const Vec3& a) { return a * (1.0 / norm(a)); }

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c)
{
    return 0.5 * norm(cross(b - a, c - a));
}

/// Area of (a, b, c) signed by orientation relative to the unit normal n.
constexpr double signed_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& n)
{
    return 0.5 * dot(cross(b - a, c - a), n);
}

/// Interior angle at vertex `at` of the triangle (at, p, q).
inline double angle_at(const Vec3& at, const Vec3& p, const Vec3& q)
{
    const Vec3 u = p - at;
    const Vec3 v = q - at;
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

} // namespace decwave

#endif
