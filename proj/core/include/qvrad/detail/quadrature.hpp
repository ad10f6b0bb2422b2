#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "qvrad/error.hpp"

namespace qvrad::detail {

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;  // absolute
    std::size_t evaluations = 0;
};

namespace gk15 {
// Kronrod abscissae on [0, 1]; odd entries (1, 3, 5) are the Gauss-7 nodes.
inline constexpr std::array<double, 8> nodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};
}  // namespace gk15

struct Panel
{
    double a, b, value, error;
    bool operator<(Panel const& o) const { return error < o.error; }
};

template<class F>
Panel gk15_panel(F& f, double a, double b)
{
    double center = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double fc = f(center);
    double kronrod = fc * gk15::kronrod_weights[7];
    double gauss = fc * gk15::gauss_weights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        double dx = half * gk15::nodes[j];
        double fsum = f(center - dx) + f(center + dx);
        kronrod += gk15::kronrod_weights[j] * fsum;
        if (j % 2 == 1)
            gauss += gk15::gauss_weights[j / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    // QUADPACK-style error scaling
    double diff = std::abs(kronrod - gauss);
    double scale = std::abs(kronrod) * 1e-15;
    return {a, b, kronrod, std::max(diff, scale)};
}

//! Global adaptive Gauss-Kronrod 7/15 over the panels [b_i, b_{i+1}].
//! Breakpoints place panel edges on the known length scales of the
//! integrand so bisection never has to discover them. Subdivision always
//! splits the panel with the largest error, so the result is deterministic.
template<class F>
QuadratureResult integrate_panels(F&& f, std::vector<double> breakpoints,
                                  double rel_tol, std::size_t max_evaluations,
                                  double abs_floor = 0.0)
{
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                      breakpoints.end());

    QuadratureResult out;
    auto counted = [&](double x) {
        ++out.evaluations;
        return f(x);
    };
    std::priority_queue<Panel> panels;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Panel p = gk15_panel(counted, breakpoints[i], breakpoints[i + 1]);
        total += p.value;
        total_error += p.error;
        panels.push(p);
    }
    while (!panels.empty() && total_error > std::max(rel_tol * std::abs(total), abs_floor)) {
        if (out.evaluations + 30 > max_evaluations) {
            throw Error(ErrorCode::Accuracy,
                        "quadrature error estimate " + std::to_string(total_error) +
                            " still above tolerance after " +
                            std::to_string(out.evaluations) + " evaluations");
        }
        Panel worst = panels.top();
        panels.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15_panel(counted, worst.a, mid);
        Panel right = gk15_panel(counted, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum from the final panel set so the value carries no drift from the
    // running updates.
    std::vector<Panel> final_panels;
    final_panels.reserve(panels.size());
    while (!panels.empty()) {
        final_panels.push_back(panels.top());
        panels.pop();
    }
    std::sort(final_panels.begin(), final_panels.end(),
              [](Panel const& x, Panel const& y) { return x.a < y.a; });
    out.value = 0.0;
    out.error = 0.0;
    for (auto const& p : final_panels) {
        out.value += p.value;
        out.error += p.error;
    }
    return out;
}

}  // namespace qvrad::detail
