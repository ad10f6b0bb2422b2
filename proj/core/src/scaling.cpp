#include "qvrad/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "qvrad/analogue.hpp"
#include "qvrad/detail/reduce.hpp"
#include "qvrad/error.hpp"
#include "qvrad/spectrum.hpp"

namespace qvrad {

namespace {

template<class E, std::size_t N>
std::string name_of(E value, std::array<std::pair<E, char const*>, N> const& names)
{
    for (auto const& [e, n] : names)
        if (e == value)
            return n;
    return "unknown";
}

template<class E, std::size_t N>
E parse_name(std::string const& s, std::array<std::pair<E, char const*>, N> const& names,
             char const* what)
{
    for (auto const& [e, n] : names)
        if (s == n)
            return e;
    throw Error(ErrorCode::Lookup, std::string("unknown ") + what + " '" + s + "'");
}

constexpr std::array<std::pair<ScalingRegime, char const*>, 7> regime_names{{
    {ScalingRegime::OneParameter, "one_parameter"},
    {ScalingRegime::PointLike, "point_like"},
    {ScalingRegime::Cosmological, "cosmological"},
    {ScalingRegime::Needle, "needle"},
    {ScalingRegime::MovingSuperluminal, "moving_superluminal"},
    {ScalingRegime::Hawking, "hawking"},
    {ScalingRegime::Unruh, "unruh"},
}};

constexpr std::array<std::pair<SweepParameter, char const*>, 7> parameter_names{{
    {SweepParameter::Omega1, "omega1"},
    {SweepParameter::Omega2, "omega2"},
    {SweepParameter::Omega3, "omega3"},
    {SweepParameter::Omega, "omega"},
    {SweepParameter::VMinusC, "v_minus_c"},
    {SweepParameter::DeltaN, "delta_n"},
    {SweepParameter::Acceleration, "acceleration"},
}};

constexpr std::array<std::pair<SweepObservable, char const*>, 8> observable_names{{
    {SweepObservable::Probability, "P"},
    {SweepObservable::MeanEnergy, "E"},
    {SweepObservable::TotalEnergy, "total_energy"},
    {SweepObservable::MonopoleEnergy, "monopole_energy"},
    {SweepObservable::Rate, "rate"},
    {SweepObservable::ThetaMax, "theta_max"},
    {SweepObservable::HawkingRate, "hawking_rate"},
    {SweepObservable::UnruhRate, "unruh_rate"},
}};

struct TableEntry
{
    double exponent;
    double tolerance;
};

using Key = std::tuple<ScalingRegime, SweepObservable, SweepParameter>;

std::map<Key, TableEntry> const& exponent_table()
{
    using R = ScalingRegime;
    using O = SweepObservable;
    using P = SweepParameter;
    constexpr double exact = 1e-9;
    static std::map<Key, TableEntry> const table{
        {{R::OneParameter, O::Probability, P::Omega}, {0.0, 0.05}},
        {{R::OneParameter, O::MeanEnergy, P::Omega}, {1.0, 0.05}},
        {{R::OneParameter, O::Probability, P::DeltaN}, {2.0, exact}},
        {{R::PointLike, O::TotalEnergy, P::Omega1}, {7.0, 0.15}},
        {{R::PointLike, O::TotalEnergy, P::Omega2}, {-6.0, 0.15}},
        {{R::PointLike, O::Probability, P::Omega1}, {6.0, 0.15}},
        {{R::PointLike, O::Probability, P::Omega2}, {-6.0, 0.15}},
        {{R::PointLike, O::MonopoleEnergy, P::Omega1}, {7.0, exact}},
        {{R::PointLike, O::MonopoleEnergy, P::Omega2}, {-6.0, exact}},
        {{R::Cosmological, O::Probability, P::Omega1}, {3.0, 0.1}},
        {{R::Cosmological, O::Probability, P::Omega2}, {-3.0, 0.1}},
        {{R::Needle, O::Probability, P::Omega1}, {5.0, 0.2}},
        {{R::Needle, O::Probability, P::Omega2}, {-1.0, 0.1}},
        {{R::Needle, O::Probability, P::Omega3}, {-4.0, 0.2}},
        {{R::MovingSuperluminal, O::Rate, P::Omega}, {1.0, 0.1}},
        {{R::MovingSuperluminal, O::Rate, P::DeltaN}, {2.0, exact}},
        {{R::MovingSuperluminal, O::ThetaMax, P::VMinusC}, {0.5, 0.1}},
        {{R::Hawking, O::HawkingRate, P::Omega}, {1.0, exact}},
        {{R::Hawking, O::HawkingRate, P::DeltaN}, {3.0, exact}},
        {{R::Unruh, O::UnruhRate, P::Omega}, {-2.0, exact}},
        {{R::Unruh, O::UnruhRate, P::Acceleration}, {3.0, exact}},
        {{R::Unruh, O::UnruhRate, P::DeltaN}, {2.0, exact}},
    };
    return table;
}

TableEntry const& lookup(ScalingRegime r, SweepObservable o, SweepParameter p)
{
    auto const& table = exponent_table();
    auto it = table.find({r, o, p});
    if (it == table.end()) {
        throw Error(ErrorCode::Lookup, "no predicted exponent for (" + to_string(r) + ", " +
                                           to_string(o) + ", " + to_string(p) + ")");
    }
    return it->second;
}

[[noreturn]] void unsupported(SweepSpec const& spec)
{
    throw Error(ErrorCode::Sweep, "parameter " + to_string(spec.parameter) +
                                      " cannot be swept in regime " + to_string(spec.regime));
}

Vec3 direction_or_x(Vec3 const& v)
{
    double n = norm(v);
    return n > 0.0 ? (1.0 / n) * v : Vec3{1.0, 0.0, 0.0};
}

PulseProfile static_point(SweepSpec const& spec, double value)
{
    PulseProfile const& base = spec.base;
    if (!base.is<StaticAnisotropic>())
        throw Error(ErrorCode::Sweep, to_string(spec.regime) + " sweeps need a static template");
    auto s = base.as<StaticAnisotropic>();
    bool tied = spec.regime == ScalingRegime::PointLike || spec.regime == ScalingRegime::Cosmological;
    switch (spec.parameter) {
    case SweepParameter::Omega:
        if (spec.regime != ScalingRegime::OneParameter)
            unsupported(spec);
        s.omega1 = s.omega2 = s.omega3 = value;
        break;
    case SweepParameter::Omega1: s.omega1 = value; break;
    case SweepParameter::Omega2:
        s.omega2 = value;
        if (tied)
            s.omega3 = value;
        break;
    case SweepParameter::Omega3: s.omega3 = value; break;
    case SweepParameter::DeltaN: return base.with_delta_n(value);
    default: unsupported(spec);
    }
    return base.with_shape(s);
}

PulseProfile moving_point(SweepSpec const& spec, double value)
{
    PulseProfile const& base = spec.base;
    if (!base.is<UniformlyMoving>())
        throw Error(ErrorCode::Sweep, to_string(spec.regime) + " sweeps need a moving template");
    auto s = base.as<UniformlyMoving>();
    switch (spec.parameter) {
    case SweepParameter::Omega: s.omega = value; return base.with_shape(s);
    case SweepParameter::VMinusC:
        if (spec.regime != ScalingRegime::MovingSuperluminal)
            unsupported(spec);
        s.velocity = (base.light_speed() + value) * direction_or_x(s.velocity);
        return base.with_shape(s);
    case SweepParameter::DeltaN: {
        if (spec.regime == ScalingRegime::MovingSuperluminal)
            return base.with_delta_n(value);
        // Fixed v, fractional crossing depth and physical width c / Omega:
        // n0 and Omega absorb the change.
        double v = norm(s.velocity);
        double depth = (1.0 / v - base.n0()) / base.delta_n();
        MaterialParams m = base.material();
        m.n0 = 1.0 / v - depth * value;
        s.omega = base.as<UniformlyMoving>().omega * base.n0() / m.n0;
        return PulseProfile(value, m, base.envelope(), s);
    }
    default: unsupported(spec);
    }
}

PulseProfile accelerated_point(SweepSpec const& spec, double value)
{
    PulseProfile const& base = spec.base;
    if (!base.is<Accelerated>())
        throw Error(ErrorCode::Sweep, "unruh sweeps need an accelerated template");
    auto s = base.as<Accelerated>();
    switch (spec.parameter) {
    case SweepParameter::Omega: s.omega = value; return base.with_shape(s);
    case SweepParameter::DeltaN: return base.with_delta_n(value);
    case SweepParameter::Acceleration: {
        auto const* ua = std::get_if<UniformAcceleration>(&s.trajectory.kind());
        if (ua == nullptr)
            throw Error(ErrorCode::Sweep, "acceleration sweeps need a uniform-acceleration template");
        UniformAcceleration next = *ua;
        next.acceleration = value * direction_or_x(ua->acceleration);
        s.trajectory = Trajectory(next);
        return base.with_shape(s);
    }
    default: unsupported(spec);
    }
}

void check_regime(SweepSpec const& spec, PulseProfile const& p, std::size_t index, double value)
{
    auto fail = [&](std::string const& why) {
        throw Error(ErrorCode::Sweep, "sweep point " + std::to_string(index) + " (" +
                                          to_string(spec.parameter) + " = " + std::to_string(value) +
                                          ") violates the " + to_string(spec.regime) +
                                          " regime: " + why);
    };
    constexpr double slack = 1.0 + 1e-12;
    switch (spec.regime) {
    case ScalingRegime::OneParameter: {
        auto const& s = p.as<StaticAnisotropic>();
        if (s.omega1 != s.omega2 || s.omega2 != s.omega3)
            fail("rates must be equal");
        break;
    }
    case ScalingRegime::PointLike: {
        auto const& s = p.as<StaticAnisotropic>();
        if (s.omega1 / std::min(s.omega2, s.omega3) > slack / asymptotic_ratio)
            fail("need Omega1 / min(Omega2, Omega3) <= 1/30");
        break;
    }
    case ScalingRegime::Cosmological: {
        auto const& s = p.as<StaticAnisotropic>();
        if (s.omega1 / std::max(s.omega2, s.omega3) * slack < asymptotic_ratio)
            fail("need Omega1 / max(Omega2, Omega3) >= 30");
        break;
    }
    case ScalingRegime::Needle: {
        auto const& s = p.as<StaticAnisotropic>();
        if (s.omega1 / s.omega2 * slack < asymptotic_ratio || s.omega3 / s.omega1 * slack < asymptotic_ratio)
            fail("need Omega2 << Omega1 << Omega3 with ratios >= 30");
        break;
    }
    case ScalingRegime::MovingSuperluminal:
        if (!(norm(p.as<UniformlyMoving>().velocity) > p.light_speed()))
            fail("pulse speed must exceed c = 1/n0");
        break;
    case ScalingRegime::Hawking: {
        if (!(p.n0() >= 1.0))
            fail("fixed crossing depth would need n0 < 1");
        auto r = classify_regime(p.n0(), p.delta_n(), norm(p.as<UniformlyMoving>().velocity));
        if (r.regime != LuminalRegime::TransLuminal)
            fail("pulse must be trans-luminal");
        break;
    }
    case ScalingRegime::Unruh:
        if (!unruh_rate_estimate(p).valid)
            fail("need Omega >= 10 a");
        break;
    }
}

}  // namespace

std::string to_string(ScalingRegime r) { return name_of(r, regime_names); }
std::string to_string(SweepParameter p) { return name_of(p, parameter_names); }
std::string to_string(SweepObservable o) { return name_of(o, observable_names); }

ScalingRegime scaling_regime_from_string(std::string const& s)
{
    return parse_name(s, regime_names, "regime");
}

SweepParameter sweep_parameter_from_string(std::string const& s)
{
    return parse_name(s, parameter_names, "sweep parameter");
}

SweepObservable sweep_observable_from_string(std::string const& s)
{
    return parse_name(s, observable_names, "observable");
}

double expected_exponent(ScalingRegime regime, SweepObservable observable, SweepParameter parameter)
{
    return lookup(regime, observable, parameter).exponent;
}

double exponent_tolerance(ScalingRegime regime, SweepObservable observable, SweepParameter parameter)
{
    return lookup(regime, observable, parameter).tolerance;
}

PulseProfile sweep_profile(SweepSpec const& spec, double value)
{
    switch (spec.regime) {
    case ScalingRegime::OneParameter:
    case ScalingRegime::PointLike:
    case ScalingRegime::Cosmological:
    case ScalingRegime::Needle: return static_point(spec, value);
    case ScalingRegime::MovingSuperluminal:
    case ScalingRegime::Hawking: return moving_point(spec, value);
    case ScalingRegime::Unruh: return accelerated_point(spec, value);
    }
    unsupported(spec);
}

void validate_sweep(SweepSpec const& spec)
{
    lookup(spec.regime, spec.observable, spec.parameter);
    auto const& v = spec.values;
    if (v.empty())
        throw Error(ErrorCode::Sweep, "sweep grid is empty");
    if (v.size() < minimum_sweep_points) {
        throw Error(ErrorCode::Sweep, "sweep grid has " + std::to_string(v.size()) +
                                          " points; at least 4 are required");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i]))
            throw Error(ErrorCode::Sweep, "sweep point " + std::to_string(i) + " is not positive");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw Error(ErrorCode::Sweep, "sweep values must be strictly increasing (point " +
                                              std::to_string(i) + ")");
    }
    if (spec.parameter != SweepParameter::VMinusC && v.back() / v.front() < minimum_sweep_span) {
        throw Error(ErrorCode::Sweep, "sweep spans a factor " + std::to_string(v.back() / v.front()) +
                                          "; at least 8 is required");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        PulseProfile p = [&] {
            try {
                return sweep_profile(spec, v[i]);
            } catch (Error const& e) {
                if (e.code() == ErrorCode::Sweep)
                    throw;
                throw Error(ErrorCode::Sweep, "sweep point " + std::to_string(i) + ": " + e.what());
            }
        }();
        check_regime(spec, p, i, v[i]);
    }
}

SweepRow evaluate_point(SweepSpec const& spec, double value)
{
    PulseProfile p = sweep_profile(spec, value);
    SweepRow row;
    row.parameter = value;
    IntegratorSpec integ = spec.integrator;
    auto take = [&](Estimate const& e) {
        row.value = e.value;
        row.error = e.error;
        row.evaluations = e.info.evaluations;
    };
    switch (spec.observable) {
    case SweepObservable::Probability: take(total_probability(analytic_spectrum(p), p.n0(), integ)); break;
    case SweepObservable::MeanEnergy: take(mean_photon_energy(analytic_spectrum(p), p.n0(), integ)); break;
    case SweepObservable::TotalEnergy: take(total_energy(analytic_spectrum(p), p.n0(), integ)); break;
    case SweepObservable::MonopoleEnergy: row.value = monopole_energy_estimate(p).value; break;
    case SweepObservable::Rate:
    case SweepObservable::ThetaMax: {
        auto r = emission_rate(moving_spectrum(p), p.n0(), integ);
        row.evaluations = r.info.evaluations;
        if (spec.observable == SweepObservable::Rate) {
            row.value = r.rate;
            row.error = r.rate_error;
        } else {
            row.value = r.theta_max.value_or(0.0);
        }
        break;
    }
    case SweepObservable::HawkingRate: row.value = hawking_rate_estimate(horizon_report(p)).rate; break;
    case SweepObservable::UnruhRate: row.value = unruh_rate_estimate(p).rate; break;
    }
    return row;
}

SweepTable run_sweep(SweepSpec const& spec)
{
    validate_sweep(spec);
    SweepTable table;
    table.regime = spec.regime;
    table.parameter = spec.parameter;
    table.observable = spec.observable;
    SweepSpec inner = spec;
    inner.integrator.workers = 1;
    table.rows = detail::map_blocks<SweepRow>(spec.values.size(), spec.integrator.workers,
                                              [&](std::size_t i) {
                                                  try {
                                                      return evaluate_point(inner, spec.values[i]);
                                                  } catch (Error const& e) {
                                                      throw Error(e.code(), "sweep point " + std::to_string(i) + " (" +
                                                                                to_string(spec.parameter) + " = " +
                                                                                std::to_string(spec.values[i]) + "): " + e.what());
                                                  }
                                              });
    return table;
}

ScalingFit fit_exponent(std::vector<double> const& x, std::vector<double> const& y)
{
    if (x.size() != y.size())
        throw Error(ErrorCode::Fit, "fit needs matching parameter and value columns");
    if (x.size() < minimum_sweep_points)
        throw Error(ErrorCode::Fit, "fit needs at least 4 points");
    std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
            throw Error(ErrorCode::Fit, "non-positive entry at row " + std::to_string(i) +
                                            " cannot be fitted on log-log axes");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0))
        throw Error(ErrorCode::Fit, "parameter column has no spread");
    ScalingFit f;
    f.exponent = sxy / sxx;
    f.intercept = my - f.exponent * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - (f.intercept + f.exponent * lx[i]);
        f.residuals.push_back(r);
        sse += r * r;
    }
    f.std_error = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

ScalingFit fit_exponent(SweepTable const& table)
{
    std::vector<double> x, y;
    for (auto const& r : table.rows) {
        x.push_back(r.parameter);
        y.push_back(r.value);
    }
    return fit_exponent(x, y);
}

Verdict judge(SweepTable const& table, ScalingFit const& fit, IntegrationMethod method)
{
    auto const& entry = lookup(table.regime, table.observable, table.parameter);
    Verdict v;
    v.regime = table.regime;
    v.parameter = table.parameter;
    v.observable = table.observable;
    v.expected = entry.exponent;
    v.tolerance = entry.tolerance;
    v.fitted = fit.exponent;
    v.std_error = fit.std_error;
    v.r_squared = fit.r_squared;
    v.pass = std::abs(fit.exponent - entry.exponent) <= entry.tolerance;
    if (entry.exponent == 0.0) {
        double lo = table.rows.front().value;
        double hi = lo;
        for (auto const& r : table.rows) {
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
        }
        v.flatness = hi / lo;
        v.pass = v.pass && *v.flatness <= flatness_limit;
    } else if (method == IntegrationMethod::Quadrature && table.observable != SweepObservable::ThetaMax) {
        v.pass = v.pass && fit.r_squared >= deterministic_r_squared;
    }
    return v;
}

}  // namespace qvrad
