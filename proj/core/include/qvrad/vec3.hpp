#pragma once

#include <array>
#include <cmath>

namespace qvrad {

using Vec3 = std::array<double, 3>;

constexpr Vec3 operator+(Vec3 const& a, Vec3 const& b)
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

constexpr Vec3 operator-(Vec3 const& a, Vec3 const& b)
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

constexpr Vec3 operator-(Vec3 const& a) { return {-a[0], -a[1], -a[2]}; }

constexpr Vec3 operator*(double s, Vec3 const& a)
{
    return {s * a[0], s * a[1], s * a[2]};
}

constexpr double dot(Vec3 const& a, Vec3 const& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(Vec3 const& a) { return std::sqrt(dot(a, a)); }

constexpr Vec3 cross(Vec3 const& a, Vec3 const& b)
{
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

inline bool is_finite(Vec3 const& a)
{
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

}  // namespace qvrad
