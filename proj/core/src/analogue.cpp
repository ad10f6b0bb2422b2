#include "qvrad/analogue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "qvrad/constants.hpp"
#include "qvrad/error.hpp"

namespace qvrad {

namespace {

using constants::pi;
using constants::two_pi;

Matrix4 multiply(Matrix4 const& a, Matrix4 const& b)
{
    Matrix4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                r[i][j] += a[i][k] * b[k][j];
    return r;
}

std::array<double, 4> apply(Matrix4 const& m, std::array<double, 4> const& x)
{
    std::array<double, 4> r{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            r[i] += m[i][k] * x[k];
    return r;
}

void check_boost(Vec3 const& u, double c)
{
    if (!is_finite(u))
        throw Error(ErrorCode::Domain, "boost velocity must be finite");
    if (norm(u) >= c) {
        throw Error(ErrorCode::NoValidBoost, "boost speed " + std::to_string(norm(u)) +
                                                 " is not below the medium light speed " +
                                                 std::to_string(c));
    }
}

}  // namespace

Matrix4 lorentz_boost(Vec3 const& u, double c)
{
    check_boost(u, c);
    Matrix4 m{};
    for (int i = 0; i < 4; ++i)
        m[i][i] = 1.0;
    double u2 = dot(u, u);
    if (u2 == 0.0)
        return m;
    double gamma = 1.0 / std::sqrt(1.0 - u2 / (c * c));
    m[0][0] = gamma;
    for (int j = 0; j < 3; ++j) {
        m[0][j + 1] = -gamma * u[j] / (c * c);
        m[j + 1][0] = -gamma * u[j];
        for (int k = 0; k < 3; ++k)
            m[j + 1][k + 1] += (gamma - 1.0) * u[j] * u[k] / u2;
    }
    return m;
}

BoostedProfile::BoostedProfile(PulseProfile base, Matrix4 to_base, Matrix4 from_base)
    : base_(std::move(base)), to_base_(to_base), from_base_(from_base)
{
}

double BoostedProfile::evaluate(double t, Vec3 const& r) const
{
    auto x = apply(to_base_, {t, r[0], r[1], r[2]});
    return evaluate_profile(base_, x[0], {x[1], x[2], x[3]});
}

Vec3 BoostedProfile::pulse_velocity() const
{
    auto const& s = base_.as<UniformlyMoving>();
    auto a = apply(from_base_, {0.0, s.center[0], s.center[1], s.center[2]});
    Vec3 end = s.center + s.velocity;
    auto b = apply(from_base_, {1.0, end[0], end[1], end[2]});
    double dt = b[0] - a[0];
    return {(b[1] - a[1]) / dt, (b[2] - a[2]) / dt, (b[3] - a[3]) / dt};
}

BoostedProfile boost_profile(PulseProfile const& p, Vec3 const& u)
{
    if (!p.is<UniformlyMoving>())
        throw Error(ErrorCode::WrongVariant, "boost_profile needs a uniformly moving pulse");
    double c = p.light_speed();
    return BoostedProfile(p, lorentz_boost(-u, c), lorentz_boost(u, c));
}

BoostedProfile boost_profile(BoostedProfile const& p, Vec3 const& u)
{
    double c = p.base().light_speed();
    return BoostedProfile(p.base(), multiply(p.to_base(), lorentz_boost(-u, c)),
                          multiply(lorentz_boost(u, c), p.from_base()));
}

//---------------------------------------------------------------------------//

std::string to_string(LuminalRegime r)
{
    switch (r) {
    case LuminalRegime::SubLuminal: return "sub_luminal";
    case LuminalRegime::TransLuminal: return "trans_luminal";
    case LuminalRegime::SuperLuminal: return "super_luminal";
    }
    return "unknown";
}

RegimeClassification classify_regime(double n0, double delta_n, double v)
{
    if (!(n0 > 0.0) || !(delta_n > 0.0) || !(delta_n < 1.0) || !(v > 0.0) ||
        !std::isfinite(n0) || !std::isfinite(v)) {
        throw Error(ErrorCode::Domain, "classify_regime needs positive n0, v and 0 < dn < 1");
    }
    RegimeClassification r;
    r.c_outside = 1.0 / n0;
    r.c_inside = 1.0 / (n0 + delta_n);
    r.v = v;
    double tol = regime_tolerance * r.c_outside;
    if (v <= r.c_inside - tol)
        r.regime = LuminalRegime::SubLuminal;
    else if (v >= r.c_outside + tol)
        r.regime = LuminalRegime::SuperLuminal;
    else
        r.regime = LuminalRegime::TransLuminal;
    return r;
}

//---------------------------------------------------------------------------//

std::string to_string(HorizonType t)
{
    return t == HorizonType::BlackHole ? "black_hole" : "white_hole";
}

SpeedProfile comoving_speed_profile(PulseProfile const& p)
{
    if (!p.is<UniformlyMoving>())
        throw Error(ErrorCode::WrongVariant, "horizons need a uniformly moving pulse");
    double n0 = p.n0();
    double c = p.light_speed();
    double amp = p.delta_n();
    double scale = p.as<UniformlyMoving>().omega / c;
    Envelope env = p.envelope();
    SpeedProfile out;
    out.width = 1.0 / scale;
    out.speed = [=](double x) {
        return 1.0 / (n0 + amp * envelope_value(env, scale * std::abs(x)));
    };
    out.derivative = [=](double x) {
        double sx = scale * std::abs(x);
        double local = 1.0 / (n0 + amp * envelope_value(env, sx));
        double sign = x < 0.0 ? -1.0 : 1.0;
        double dn_dx = amp * envelope_derivative(env, sx) * scale * sign;
        return -local * local * dn_dx;
    };
    return out;
}

SurfaceGravity surface_gravity(SpeedProfile const& c, double x)
{
    double kappa = std::abs(c.derivative(x));
    if (!(kappa >= degenerate_surface_gravity)) {
        throw Error(ErrorCode::DegenerateHorizon,
                    "surface gravity " + std::to_string(kappa) + " at x = " + std::to_string(x) +
                        " indicates a tangential crossing");
    }
    return {kappa, kappa / two_pi};
}

SurfaceGravity surface_gravity(PulseProfile const& p, double /*v*/, double x)
{
    return surface_gravity(comoving_speed_profile(p), x);
}

std::vector<Horizon> find_horizons(SpeedProfile const& c, double v)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::Domain, "horizon search needs a positive speed");
    double half = horizon_search_widths * c.width;
    std::size_t n = horizon_search_points;
    auto g = [&](double x) { return c.speed(x) - v; };
    std::vector<double> xs(n);
    std::vector<double> gs(n);
    for (std::size_t i = 0; i < n; ++i) {
        double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        xs[i] = -half + 2.0 * half * frac;
    }
    // Mirror-exact lattice for even envelopes
    for (std::size_t i = 0; i < n / 2; ++i)
        xs[n - 1 - i] = -xs[i];
    for (std::size_t i = 0; i < n; ++i)
        gs[i] = g(xs[i]);

    std::vector<Horizon> out;
    double tol = horizon_root_tolerance * v;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(gs[i] * gs[i + 1] < 0.0))
            continue;
        double a = xs[i];
        double b = xs[i + 1];
        std::uintmax_t iters = 200;
        auto bracket = boost::math::tools::toms748_solve(
            g, a, b, gs[i], gs[i + 1], boost::math::tools::eps_tolerance<double>(52), iters);
        double root = std::abs(g(bracket.first)) <= std::abs(g(bracket.second)) ? bracket.first
                                                                                : bracket.second;
        if (std::abs(g(root)) > tol) {
            throw Error(ErrorCode::Accuracy, "horizon refinement stalled at residual " +
                                                 std::to_string(std::abs(g(root))));
        }
        Horizon h;
        h.position = root;
        h.type = c.derivative(root) > 0.0 ? HorizonType::BlackHole : HorizonType::WhiteHole;
        auto sg = surface_gravity(c, root);
        h.surface_gravity = sg.kappa;
        h.temperature = sg.temperature;
        out.push_back(h);
    }
    if (!out.empty())
        return out;

    auto low = std::min_element(gs.begin(), gs.end()) - gs.begin();
    double lo = xs[std::max<std::ptrdiff_t>(low - 1, 0)];
    double hi = xs[std::min<std::ptrdiff_t>(low + 1, static_cast<std::ptrdiff_t>(n) - 1)];
    auto minimum = boost::math::tools::brent_find_minima(g, lo, hi, 52);
    if (std::abs(minimum.second) <= tol) {
        throw Error(ErrorCode::DegenerateHorizon,
                    "c(x) touches v tangentially at x = " + std::to_string(minimum.first));
    }
    throw Error(ErrorCode::NoHorizon, "c(x) - v has no sign change: no horizon for v = " +
                                          std::to_string(v));
}

std::vector<Horizon> find_horizons(PulseProfile const& p, double v)
{
    return find_horizons(comoving_speed_profile(p), v);
}

double HorizonReport::temperature() const
{
    double t = 0.0;
    for (auto const& h : horizons)
        t = std::max(t, h.temperature);
    return t;
}

HorizonReport horizon_report(PulseProfile const& p, HawkingGeometry geometry)
{
    if (!p.is<UniformlyMoving>())
        throw Error(ErrorCode::WrongVariant, "horizon report needs a uniformly moving pulse");
    auto const& s = p.as<UniformlyMoving>();
    HorizonReport r;
    double v = norm(s.velocity);
    r.regime = classify_regime(p.n0(), p.delta_n(), v);
    r.horizons = find_horizons(p, v);
    r.geometry = geometry;
    r.omega = s.omega;
    r.delta_n = p.delta_n();
    if (geometry == HawkingGeometry::ThreeD) {
        double l = p.light_speed() / s.omega;
        r.area = l * l;
    }
    return r;
}

HawkingEstimate hawking_rate_estimate(HorizonReport const& report)
{
    HawkingEstimate e;
    if (report.geometry == HawkingGeometry::OneD) {
        e.rate = report.omega * report.delta_n;
        e.non_perturbative = true;
        e.note = "non-perturbative estimate";
        return e;
    }
    if (!report.area)
        throw Error(ErrorCode::MissingArea, "3D Hawking estimate needs an effective area");
    double t = report.temperature();
    e.rate = *report.area * t * t * t;
    e.note = "order-of-magnitude estimate A T^3";
    return e;
}

//---------------------------------------------------------------------------//

double unruh_temperature(double a)
{
    if (!(a >= 0.0) || !std::isfinite(a))
        throw Error(ErrorCode::Domain, "acceleration must be finite and non-negative");
    return a / two_pi;
}

UnruhKelvin unruh_temperature_kelvin(double a_si, bool medium_frame, double n0)
{
    if (!(a_si >= 0.0) || !std::isfinite(a_si))
        throw Error(ErrorCode::Domain, "acceleration must be finite and non-negative");
    if (medium_frame && !(n0 >= 1.0))
        throw Error(ErrorCode::Domain, "medium frame needs n0 >= 1");
    UnruhKelvin k;
    k.hbar = constants::hbar;
    k.boltzmann = constants::boltzmann;
    k.light_speed = medium_frame ? constants::vacuum_light_speed / n0 : constants::vacuum_light_speed;
    k.kelvin = k.hbar * a_si / (two_pi * k.boltzmann * k.light_speed);
    return k;
}

namespace {

Vec3 tabulated_acceleration(Tabulated const& tab, double t)
{
    auto const& ts = tab.times;
    if (ts.size() < 3)
        throw Error(ErrorCode::UnsupportedTrajectory, "tabulated trajectory needs at least three samples");
    std::size_t i = 1;
    double best = std::abs(ts[1] - t);
    for (std::size_t j = 2; j + 1 < ts.size(); ++j) {
        if (std::abs(ts[j] - t) < best) {
            best = std::abs(ts[j] - t);
            i = j;
        }
    }
    auto const& x = tab.positions;
    double h0 = ts[i] - ts[i - 1];
    double h1 = ts[i + 1] - ts[i];
    Vec3 d0 = (1.0 / h0) * (x[i] - x[i - 1]);
    Vec3 d1 = (1.0 / h1) * (x[i + 1] - x[i]);
    return (2.0 / (h0 + h1)) * (d1 - d0);
}

}  // namespace

UnruhReport unruh_rate_estimate(PulseProfile const& p, double t)
{
    if (!p.is<Accelerated>())
        throw Error(ErrorCode::WrongVariant, "Unruh estimate needs an accelerated pulse");
    auto const& s = p.as<Accelerated>();
    UnruhReport r;
    Vec3 acc{};
    std::visit(
        [&](auto const& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, UniformAcceleration>) {
                acc = k.acceleration;
            } else if constexpr (std::is_same_v<T, UniformVelocity>) {
                acc = {0.0, 0.0, 0.0};
            } else {
                acc = tabulated_acceleration(k, t);
                r.approximate = true;
                r.warnings.push_back("instantaneous estimate from a tabulated trajectory");
            }
        },
        s.trajectory.kind());
    r.acceleration = norm(acc);
    r.temperature = unruh_temperature(r.acceleration);
    double l = p.light_speed() / s.omega;
    r.cross_section = p.delta_n() * p.delta_n() * l * l;
    r.rate = r.cross_section * r.temperature * r.temperature * r.temperature;
    r.valid = s.omega >= unruh_validity_factor * r.acceleration;
    if (!r.valid) {
        r.warnings.push_back("Omega < 10 a: the pulse smears out its trajectory and the "
                             "Unruh estimate does not apply");
    }
    return r;
}

}  // namespace qvrad
