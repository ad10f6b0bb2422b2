#pragma once

#include <array>
#include <cmath>

namespace qvrad::detail {

//! Upper-tail Gaussian moments T_m(x) = \int_x^\infty s^m e^{-beta s^2} ds
//! for m = 0..5 and x >= 0, by the standard integration-by-parts recursion.
inline std::array<double, 6> gaussian_tail_moments(double x, double beta)
{
    constexpr double sqrt_pi = 1.7724538509055160273;
    double root_beta = std::sqrt(beta);
    double g = std::exp(-beta * x * x);
    double inv2b = 0.5 / beta;
    std::array<double, 6> t{};
    t[0] = 0.5 * sqrt_pi / root_beta * std::erfc(root_beta * x);
    t[1] = g * inv2b;
    t[2] = x * g * inv2b + t[0] * inv2b;
    t[3] = x * x * g * inv2b + 2.0 * t[1] * inv2b;
    t[4] = x * x * x * g * inv2b + 3.0 * t[2] * inv2b;
    t[5] = x * x * x * x * g * inv2b + 4.0 * t[3] * inv2b;
    return t;
}

//! Weight of a photon pair with total momentum magnitude d, integrated over
//! the prolate spheroid |k| + |k'| = s at fixed s:
//!   \int d^3k |k||k'| delta(|k|+|k'| - s) = (pi/16) w(s, d),
//!   w(s, d) = 2 s^4 - (4/3) d^2 s^2 + (2/5) d^4,  s >= d.
inline double spheroid_shell_weight(double s, double d)
{
    double s2 = s * s;
    double d2 = d * d;
    return 2.0 * s2 * s2 - (4.0 / 3.0) * d2 * s2 + 0.4 * d2 * d2;
}

//! \int_{x}^{\infty} s^p w(s, d) e^{-beta s^2} ds for p = 0 (probability
//! weight) and p = 1 (energy weight), from tail moments evaluated at x.
struct ShellTails
{
    double probability;
    double energy;
};

inline ShellTails shell_tails(std::array<double, 6> const& t, double d)
{
    double d2 = d * d;
    return {2.0 * t[4] - (4.0 / 3.0) * d2 * t[2] + 0.4 * d2 * d2 * t[0],
            2.0 * t[5] - (4.0 / 3.0) * d2 * t[3] + 0.4 * d2 * d2 * t[1]};
}

}  // namespace qvrad::detail
