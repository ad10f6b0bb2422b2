#include "doctest.h"

#include <cmath>
#include <random>

#include "qvrad/analogue.hpp"
#include "qvrad/error.hpp"
#include "qvrad/scaling.hpp"

using namespace qvrad;

namespace {

std::vector<double> geometric(double lo, double ratio, std::size_t n)
{
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(lo * std::pow(ratio, static_cast<double>(i)));
    return v;
}

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (Error const& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Domain;
}

SweepTable table_of(std::vector<double> const& x, std::vector<double> const& y, ScalingRegime r,
                    SweepParameter p, SweepObservable o)
{
    SweepTable t;
    t.regime = r;
    t.parameter = p;
    t.observable = o;
    for (std::size_t i = 0; i < x.size(); ++i)
        t.rows.push_back({x[i], y[i], 0.0, 0});
    return t;
}

}  // namespace

TEST_CASE("fit recovers an exact power law")
{
    auto x = geometric(0.3, 2.0, 6);
    std::vector<double> y;
    for (double xi : x)
        y.push_back(7.0 * xi * xi * xi);
    auto f = fit_exponent(x, y);
    CHECK(f.exponent == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(7.0).epsilon(1e-10));
    CHECK(std::isfinite(f.std_error));
    CHECK(f.residuals.size() == 6);

    auto flat = fit_exponent(x, std::vector<double>(6, 2.5));
    CHECK(std::abs(flat.exponent) < 1e-12);
}

TEST_CASE("fit tolerates multiplicative noise")
{
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto x = geometric(1.0, std::pow(100.0, 1.0 / 9.0), 10);
    std::vector<double> y;
    for (double xi : x)
        y.push_back(xi * xi * xi * (1.0 + noise(rng)));
    auto f = fit_exponent(x, y);
    CHECK(std::abs(f.exponent - 3.0) <= 0.1);
    CHECK(f.r_squared > 0.99);
}

TEST_CASE("fit slope is invariant under rescaling the parameter axis")
{
    auto x = geometric(0.5, 1.7, 7);
    std::vector<double> y;
    for (std::size_t i = 0; i < x.size(); ++i)
        y.push_back(std::pow(x[i], -1.3) * (1.0 + 0.05 * std::sin(3.0 * static_cast<double>(i))));
    auto a = fit_exponent(x, y);
    std::vector<double> xs;
    for (double xi : x)
        xs.push_back(123.4 * xi);
    auto b = fit_exponent(xs, y);
    CHECK(std::abs(a.exponent - b.exponent) <= 1e-10);
    CHECK(a.intercept != doctest::Approx(b.intercept));
}

TEST_CASE("fit rejects unusable tables")
{
    CHECK(code_of([] { fit_exponent({1, 2, 3, 4}, {1, 0, 3, 4}); }) == ErrorCode::Fit);
    CHECK(code_of([] { fit_exponent({1, 2, 3, 4}, {1, -2, 3, 4}); }) == ErrorCode::Fit);
    CHECK(code_of([] { fit_exponent({1, 2, 3}, {1, 2, 3}); }) == ErrorCode::Fit);
    CHECK(code_of([] { fit_exponent({1, 2, 3, 4}, {1, 2, 3}); }) == ErrorCode::Fit);
    CHECK(code_of([] { fit_exponent({2, 2, 2, 2}, {1, 2, 3, 4}); }) == ErrorCode::Fit);
}

TEST_CASE("predicted exponent table")
{
    using R = ScalingRegime;
    using O = SweepObservable;
    using P = SweepParameter;
    CHECK(expected_exponent(R::OneParameter, O::Probability, P::Omega) == 0.0);
    CHECK(expected_exponent(R::OneParameter, O::MeanEnergy, P::Omega) == 1.0);
    CHECK(expected_exponent(R::PointLike, O::TotalEnergy, P::Omega1) == 7.0);
    CHECK(expected_exponent(R::PointLike, O::TotalEnergy, P::Omega2) == -6.0);
    CHECK(expected_exponent(R::PointLike, O::Probability, P::Omega1) == 6.0);
    CHECK(expected_exponent(R::PointLike, O::Probability, P::Omega2) == -6.0);
    CHECK(expected_exponent(R::Cosmological, O::Probability, P::Omega1) == 3.0);
    CHECK(expected_exponent(R::Cosmological, O::Probability, P::Omega2) == -3.0);
    CHECK(expected_exponent(R::Needle, O::Probability, P::Omega1) == 5.0);
    CHECK(expected_exponent(R::Needle, O::Probability, P::Omega2) == -1.0);
    CHECK(expected_exponent(R::Needle, O::Probability, P::Omega3) == -4.0);
    CHECK(expected_exponent(R::MovingSuperluminal, O::Rate, P::Omega) == 1.0);
    CHECK(expected_exponent(R::MovingSuperluminal, O::ThetaMax, P::VMinusC) == 0.5);
    CHECK(expected_exponent(R::Hawking, O::HawkingRate, P::Omega) == 1.0);
    CHECK(expected_exponent(R::Hawking, O::HawkingRate, P::DeltaN) == 3.0);
    CHECK(expected_exponent(R::Unruh, O::UnruhRate, P::Omega) == -2.0);
    CHECK(expected_exponent(R::Unruh, O::UnruhRate, P::Acceleration) == 3.0);
    CHECK(expected_exponent(R::Unruh, O::UnruhRate, P::DeltaN) == 2.0);

    CHECK(exponent_tolerance(R::OneParameter, O::Probability, P::Omega) == 0.05);
    CHECK(exponent_tolerance(R::Cosmological, O::Probability, P::Omega2) == 0.1);
    CHECK(exponent_tolerance(R::Needle, O::Probability, P::Omega3) == 0.2);

    CHECK(code_of([] { expected_exponent(R::Needle, O::Rate, P::Omega3); }) == ErrorCode::Lookup);
    CHECK(code_of([] { expected_exponent(R::OneParameter, O::Probability, P::Omega1); }) ==
          ErrorCode::Lookup);
}

TEST_CASE("names round trip")
{
    for (auto r : {ScalingRegime::OneParameter, ScalingRegime::PointLike, ScalingRegime::Cosmological,
                   ScalingRegime::Needle, ScalingRegime::MovingSuperluminal, ScalingRegime::Hawking,
                   ScalingRegime::Unruh})
        CHECK(scaling_regime_from_string(to_string(r)) == r);
    for (auto p : {SweepParameter::Omega1, SweepParameter::Omega2, SweepParameter::Omega3,
                   SweepParameter::Omega, SweepParameter::VMinusC, SweepParameter::DeltaN,
                   SweepParameter::Acceleration})
        CHECK(sweep_parameter_from_string(to_string(p)) == p);
    CHECK(sweep_observable_from_string("P") == SweepObservable::Probability);
    CHECK(code_of([] { sweep_parameter_from_string("omega4"); }) == ErrorCode::Lookup);
}

TEST_CASE("sweep validation")
{
    SweepSpec s;
    s.values = {};
    CHECK(code_of([&] { validate_sweep(s); }) == ErrorCode::Sweep);
    s.values = {0.5, 1.0, 2.0};
    CHECK(code_of([&] { validate_sweep(s); }) == ErrorCode::Sweep);
    s.values = {0.5, 2.0, 1.0, 4.0};
    CHECK(code_of([&] { validate_sweep(s); }) == ErrorCode::Sweep);
    s.values = {0.5, 1.0, 1.5, 2.0};
    CHECK(code_of([&] { validate_sweep(s); }) == ErrorCode::Sweep);
    s.values = {-0.5, 1.0, 2.0, 4.0};
    CHECK(code_of([&] { validate_sweep(s); }) == ErrorCode::Sweep);
    s.values = {0.5, 1.0, 2.0, 4.0};
    CHECK_NOTHROW(validate_sweep(s));

    SweepSpec cosmo;
    cosmo.base = PulseProfile::anisotropic(0.01, 1.0, 0.01, 0.01);
    cosmo.regime = ScalingRegime::Cosmological;
    cosmo.parameter = SweepParameter::Omega2;
    cosmo.values = {1.0 / 480, 1.0 / 240, 1.0 / 120, 1.0 / 60, 1.0 / 30};
    CHECK_NOTHROW(validate_sweep(cosmo));
    cosmo.values.push_back(1.0 / 10);
    try {
        validate_sweep(cosmo);
        FAIL("regime violation accepted");
    } catch (Error const& e) {
        CHECK(e.code() == ErrorCode::Sweep);
        CHECK(std::string(e.what()).find("point 5") != std::string::npos);
    }

    SweepSpec wrong = s;
    wrong.regime = ScalingRegime::MovingSuperluminal;
    wrong.observable = SweepObservable::Rate;
    CHECK(code_of([&] { validate_sweep(wrong); }) == ErrorCode::Sweep);
}

TEST_CASE("tied parameters at sweep points")
{
    SweepSpec s;
    s.base = PulseProfile::anisotropic(0.01, 0.01, 1.0, 1.0);
    s.regime = ScalingRegime::PointLike;
    s.parameter = SweepParameter::Omega2;
    auto p = sweep_profile(s, 2.0).as<StaticAnisotropic>();
    CHECK(p.omega2 == 2.0);
    CHECK(p.omega3 == 2.0);
    CHECK(p.omega1 == 0.01);

    s.regime = ScalingRegime::OneParameter;
    s.base = PulseProfile::one_parameter(0.01, 1.0);
    s.parameter = SweepParameter::Omega;
    auto q = sweep_profile(s, 3.0).as<StaticAnisotropic>();
    CHECK(q.omega1 == 3.0);
    CHECK(q.omega2 == 3.0);
    CHECK(q.omega3 == 3.0);
}

TEST_CASE("Hawking delta_n sweeps hold speed, crossing depth and width")
{
    double n0 = 1.5, dn = 0.1, v = 0.64;
    SweepSpec s;
    s.base = PulseProfile::moving(dn, 1.0, {v, 0.0, 0.0}, n0);
    s.regime = ScalingRegime::Hawking;
    s.parameter = SweepParameter::DeltaN;
    s.observable = SweepObservable::HawkingRate;
    double depth = (1.0 / v - n0) / dn;
    for (double value : {0.025, 0.05, 0.2}) {
        CAPTURE(value);
        auto p = sweep_profile(s, value);
        CHECK(norm(p.as<UniformlyMoving>().velocity) == v);
        CHECK((1.0 / v - p.n0()) / value == doctest::Approx(depth).epsilon(1e-12));
        CHECK(p.light_speed() / p.as<UniformlyMoving>().omega ==
              doctest::Approx(s.base.light_speed() / 1.0).epsilon(1e-12));
        CHECK(classify_regime(p.n0(), value, v).regime == LuminalRegime::TransLuminal);
    }
}

TEST_CASE("one-parameter probability is flat in Omega")
{
    SweepSpec s;
    s.values = {0.5, 1.0, 2.0, 4.0};
    auto t = run_sweep(s);
    REQUIRE(t.rows.size() == 4);
    double lo = t.rows[0].value, hi = lo;
    for (auto const& r : t.rows) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    CHECK(hi / lo <= 1.01);
    auto v = judge(t, fit_exponent(t), IntegrationMethod::Quadrature);
    CHECK(v.pass);
    REQUIRE(v.flatness.has_value());
    CHECK(*v.flatness <= flatness_limit);
}

TEST_CASE("delta_n sweeps are exactly quadratic")
{
    SweepSpec s;
    s.parameter = SweepParameter::DeltaN;
    s.values = {0.001, 0.002, 0.004, 0.008};
    auto t = run_sweep(s);
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        CHECK(t.rows[i].value / t.rows[i - 1].value == doctest::Approx(4.0).epsilon(1e-9));
    auto f = fit_exponent(t);
    CHECK(f.exponent == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("sweep tables are ordered and independent of the worker count")
{
    SweepSpec s;
    s.base = PulseProfile::anisotropic(0.01, 1.0, 0.01, 0.01);
    s.regime = ScalingRegime::Cosmological;
    s.parameter = SweepParameter::Omega2;
    s.values = {1.0 / 480, 1.0 / 240, 1.0 / 120, 1.0 / 60, 1.0 / 30};
    auto a = run_sweep(s);
    s.integrator.workers = 3;
    auto b = run_sweep(s);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].parameter == s.values[i]);
        CHECK(a.rows[i].value == b.rows[i].value);
    }
}

TEST_CASE("verdicts compare against the table")
{
    auto x = geometric(1.0, 2.0, 4);
    std::vector<double> good, bad;
    for (double xi : x) {
        good.push_back(std::pow(xi, -3.05));
        bad.push_back(std::pow(xi, -2.8));
    }
    using R = ScalingRegime;
    auto tg = table_of(x, good, R::Cosmological, SweepParameter::Omega2, SweepObservable::Probability);
    auto vg = judge(tg, fit_exponent(tg), IntegrationMethod::Quadrature);
    CHECK(vg.pass);
    CHECK(vg.expected == -3.0);
    CHECK(vg.fitted == doctest::Approx(-3.05).epsilon(1e-12));
    CHECK_FALSE(vg.flatness.has_value());
    auto tb = table_of(x, bad, R::Cosmological, SweepParameter::Omega2, SweepObservable::Probability);
    CHECK_FALSE(judge(tb, fit_exponent(tb), IntegrationMethod::Quadrature).pass);

    // within the exponent tolerance, but not flat enough
    std::vector<double> drift;
    for (double xi : x)
        drift.push_back(std::pow(xi, 0.04));
    auto td = table_of(x, drift, R::OneParameter, SweepParameter::Omega, SweepObservable::Probability);
    auto vd = judge(td, fit_exponent(td), IntegrationMethod::Quadrature);
    CHECK_FALSE(vd.pass);
    REQUIRE(vd.flatness.has_value());
    CHECK(*vd.flatness == doctest::Approx(std::pow(8.0, 0.04)).epsilon(1e-12));
}

TEST_CASE("closed-form estimators follow their monomials exactly")
{
    SweepSpec s;
    s.base = PulseProfile::moving(0.1, 1.0, {0.64, 0.0, 0.0}, 1.5);
    s.regime = ScalingRegime::Hawking;
    s.observable = SweepObservable::HawkingRate;
    s.parameter = SweepParameter::Omega;
    s.values = geometric(0.5, 2.0, 4);
    auto t = run_sweep(s);
    CHECK(fit_exponent(t).exponent == doctest::Approx(1.0).epsilon(1e-9));
    s.parameter = SweepParameter::DeltaN;
    s.values = geometric(0.0125, 2.0, 4);
    t = run_sweep(s);
    CHECK(fit_exponent(t).exponent == doctest::Approx(3.0).epsilon(1e-9));
}
