#include "doctest.h"

#include <cmath>

#include "qvrad/analogue.hpp"
#include "qvrad/error.hpp"

using namespace qvrad;

namespace {

constexpr double pi = 3.141592653589793;

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

PulseProfile accelerated(double dn, double omega, double a, double n0 = 1.0)
{
    Accelerated s;
    s.omega = omega;
    s.trajectory = Trajectory(UniformAcceleration{{a, 0.0, 0.0}, {}, {}});
    return PulseProfile(dn, MaterialParams{n0, {}}, Envelope::Gaussian, s);
}

//! Comoving light speed of a Gaussian pulse, written out independently.
double gaussian_speed(double n0, double dn, double omega, double x)
{
    double c = 1.0 / n0;
    double u = omega * x / c;
    return 1.0 / (n0 + dn * std::exp(-u * u));
}

}  // namespace

TEST_CASE("zero boost is the identity")
{
    auto p = PulseProfile::moving(0.01, 1.0, {0.3, 0.1, 0.0}, 1.5);
    auto b = boost_profile(p, {0.0, 0.0, 0.0});
    for (double t : {-1.0, 0.0, 0.7})
        for (Vec3 r : {Vec3{0, 0, 0}, Vec3{0.3, -0.2, 0.1}, Vec3{-1.0, 0.5, 0.4}})
            CHECK(b.evaluate(t, r) == evaluate_profile(p, t, r));
}

TEST_CASE("boosting by the pulse velocity makes it stationary")
{
    for (double frac : {0.5, 0.9}) {
        double n0 = 1.5;
        double c = 1.0 / n0;
        double omega = 1.3;
        double dn = 0.01;
        Vec3 v{frac * c * 0.6, frac * c * 0.8, 0.0};
        auto p = PulseProfile::moving(dn, omega, v, n0);
        auto b = boost_profile(p, v);
        Vec3 w = b.pulse_velocity();
        CHECK(norm(w) < 1e-12);
        double h = 1e-3 / omega;
        double worst = 0.0;
        for (double t : {-2.0, 0.0, 1.5})
            for (Vec3 r : {Vec3{0.1, 0.2, 0.0}, Vec3{-0.3, 0.1, 0.2}, Vec3{0.25, -0.4, -0.1}}) {
                double dt = (b.evaluate(t + h, r) - b.evaluate(t - h, r)) / (2 * h);
                worst = std::max(worst, std::abs(dt));
            }
        CHECK(worst <= 1e-10 * omega * dn);
        CHECK(b.delta_n() == dn);
    }
}

TEST_CASE("boost then inverse boost restores the profile")
{
    auto p = PulseProfile::moving(0.02, 1.0, {0.4, 0.0, 0.1}, 1.2);
    Vec3 u{0.3, -0.2, 0.25};
    auto back = boost_profile(boost_profile(p, u), -1.0 * u);
    for (double t : {-1.0, 0.0, 0.8})
        for (Vec3 r : {Vec3{0, 0, 0}, Vec3{0.3, -0.2, 0.1}, Vec3{-0.5, 0.5, 0.4}})
            CHECK(std::abs(back.evaluate(t, r) - evaluate_profile(p, t, r)) <= 1e-12 * 0.02);
}

TEST_CASE("boosts are limited by the medium light speed")
{
    auto p = PulseProfile::moving(0.01, 1.0, {0.2, 0, 0}, 1.5);
    CHECK(code_of([&] { boost_profile(p, {1.0 / 1.5, 0, 0}); }) == ErrorCode::NoValidBoost);
    CHECK(code_of([&] { boost_profile(p, {0.7, 0, 0}); }) == ErrorCode::NoValidBoost);
    CHECK(code_of([&] { boost_profile(PulseProfile::one_parameter(0.01, 1.0), {0.1, 0, 0}); }) ==
          ErrorCode::WrongVariant);
}

TEST_CASE("luminal regimes at the reference points")
{
    auto sub = classify_regime(1.5, 0.1, 0.60);
    auto trans = classify_regime(1.5, 0.1, 0.64);
    auto super = classify_regime(1.5, 0.1, 0.70);
    CHECK(sub.regime == LuminalRegime::SubLuminal);
    CHECK(trans.regime == LuminalRegime::TransLuminal);
    CHECK(super.regime == LuminalRegime::SuperLuminal);
    CHECK(trans.c_outside == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(trans.c_inside == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(trans.v == 0.64);
    CHECK(classify_regime(1.5, 0.1, 0.625).regime == LuminalRegime::TransLuminal);
    CHECK(classify_regime(1.5, 0.1, 2.0 / 3.0).regime == LuminalRegime::TransLuminal);
    CHECK(code_of([] { classify_regime(1.5, 1.5, 0.6); }) == ErrorCode::Domain);
}

TEST_CASE("trans-luminal Gaussian has a symmetric horizon pair")
{
    double n0 = 1.5, dn = 0.1, omega = 1.0;
    double v = 0.5 * (1.0 / n0 + 1.0 / (n0 + dn));
    auto p = PulseProfile::moving(dn, omega, {v, 0, 0}, n0);
    auto hs = find_horizons(p, v);
    REQUIRE(hs.size() == 2);
    CHECK(std::abs(hs[0].position + hs[1].position) <= 1e-10 * std::abs(hs[1].position));
    CHECK(hs[0].type == HorizonType::WhiteHole);
    CHECK(hs[1].type == HorizonType::BlackHole);
    for (auto const& h : hs) {
        CHECK(std::abs(gaussian_speed(n0, dn, omega, h.position) - v) <= 1e-12 * v);
        CHECK(h.surface_gravity > 0.0);
        CHECK(h.temperature == doctest::Approx(h.surface_gravity / (2 * pi)).epsilon(1e-15));
    }
    // root from inverting the Gaussian
    double expect = (1.0 / n0) / omega * std::sqrt(-std::log((1.0 / v - n0) / dn));
    CHECK(hs[1].position == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("grazing speed puts the horizons in the wings")
{
    double n0 = 1.5, dn = 0.1, omega = 1.0;
    double v = (1.0 / n0) * (1.0 - 1e-9);
    auto p = PulseProfile::moving(dn, omega, {v, 0, 0}, n0);
    auto hs = find_horizons(p, v);
    REQUIRE(hs.size() == 2);
    double expect = (1.0 / n0) / omega * std::sqrt(-std::log((1.0 / v - n0) / dn));
    CHECK(hs[1].position == doctest::Approx(expect).epsilon(1e-6));
    CHECK(hs[0].position == doctest::Approx(-expect).epsilon(1e-6));
}

TEST_CASE("no horizons outside the trans-luminal window")
{
    auto p = PulseProfile::moving(0.1, 1.0, {0.6, 0, 0}, 1.5);
    CHECK(code_of([&] { find_horizons(p, 0.60); }) == ErrorCode::NoHorizon);
    CHECK(code_of([&] { find_horizons(p, 0.70); }) == ErrorCode::NoHorizon);
}

TEST_CASE("linear speed profile has surface gravity equal to its slope")
{
    double v = 0.5, alpha = 0.37;
    SpeedProfile c;
    c.speed = [=](double x) { return v + alpha * x; };
    c.derivative = [=](double) { return alpha; };
    c.width = 1.0;
    auto hs = find_horizons(c, v);
    REQUIRE(hs.size() == 1);
    CHECK(std::abs(hs[0].position) < 1e-12);
    CHECK(hs[0].surface_gravity == alpha);
    CHECK(surface_gravity(c, 0.0).kappa == alpha);
}

TEST_CASE("analytic surface gravity matches finite differences")
{
    struct Case
    {
        double n0, dn, omega, frac;
    };
    for (auto k : {Case{1.5, 0.1, 1.0, 0.5}, Case{1.5, 0.1, 3.0, 0.2}, Case{1.2, 0.05, 0.5, 0.8},
                   Case{1.45, 0.01, 2.0, 0.95}}) {
        double v = 1.0 / (k.n0 + k.frac * k.dn);
        auto p = PulseProfile::moving(k.dn, k.omega, {v, 0, 0}, k.n0);
        auto hs = find_horizons(p, v);
        double h = 1e-4 * (1.0 / k.n0) / k.omega;
        for (auto const& hz : hs) {
            double x = hz.position;
            double fd = (gaussian_speed(k.n0, k.dn, k.omega, x + h) -
                         gaussian_speed(k.n0, k.dn, k.omega, x - h)) /
                        (2 * h);
            CHECK(surface_gravity(p, v, x).kappa == doctest::Approx(std::abs(fd)).epsilon(1e-6));
        }
    }
}

TEST_CASE("surface gravity doubles with Omega and with delta_n")
{
    double n0 = 1.5, dn = 0.1, omega = 1.0, frac = 0.6;
    auto kappa = [&](double d, double o) {
        double v = 1.0 / (n0 + frac * d);
        auto hs = find_horizons(PulseProfile::moving(d, o, {v, 0, 0}, n0), v);
        return hs.back().surface_gravity;
    };
    double k0 = kappa(dn, omega);
    CHECK(kappa(dn, 2 * omega) / k0 == doctest::Approx(2.0).epsilon(1e-12));
    // c^2 changes with the crossing speed; compare the gradient of n instead
    double v1 = 1.0 / (n0 + frac * dn);
    double v2 = 1.0 / (n0 + frac * 2 * dn);
    CHECK((kappa(2 * dn, omega) / (v2 * v2)) / (k0 / (v1 * v1)) == doctest::Approx(2.0).epsilon(1e-9));

    // same speed and width c / Omega, background index absorbing the change
    double n0b = 1.0 / v1 - frac * 2 * dn;
    double omega_b = omega * n0 / n0b;
    auto hs = find_horizons(PulseProfile::moving(2 * dn, omega_b, {v1, 0, 0}, n0b), v1);
    CHECK(hs.back().surface_gravity / k0 == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("Hawking estimate")
{
    auto p = PulseProfile::moving(0.1, 1.0, {0.64, 0, 0}, 1.5);
    auto r = horizon_report(p);
    REQUIRE(r.area.has_value());
    CHECK(*r.area == doctest::Approx(std::pow(1.0 / 1.5, 2)).epsilon(1e-15));
    double t = r.temperature();
    CHECK(t > 0.0);
    CHECK(hawking_rate_estimate(r).rate == doctest::Approx(*r.area * t * t * t).epsilon(1e-15));

    auto cold = r;
    cold.horizons.clear();
    CHECK(hawking_rate_estimate(cold).rate == 0.0);

    auto hot = r;
    for (auto& h : hot.horizons)
        h.temperature *= 2.0;
    CHECK(hawking_rate_estimate(hot).rate / hawking_rate_estimate(r).rate == doctest::Approx(8.0).epsilon(1e-14));

    auto one_d = horizon_report(p, HawkingGeometry::OneD);
    auto e = hawking_rate_estimate(one_d);
    CHECK(e.non_perturbative);
    CHECK(e.rate == doctest::Approx(1.0 * 0.1).epsilon(1e-15));

    auto missing = r;
    missing.area.reset();
    CHECK(code_of([&] { hawking_rate_estimate(missing); }) == ErrorCode::MissingArea);
}

TEST_CASE("Unruh temperature")
{
    CHECK(unruh_temperature(2 * pi) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(unruh_temperature(0.0) == 0.0);
    CHECK(code_of([] { unruh_temperature(-1.0); }) == ErrorCode::Domain);

    double hbar = 1.054571817e-34, kb = 1.380649e-23, c0 = 299792458.0;
    double expect = hbar * 9.81 / (2 * pi * kb * c0);
    auto k = unruh_temperature_kelvin(9.81);
    CHECK(k.kelvin == doctest::Approx(expect).epsilon(5e-5));
    CHECK(k.kelvin > 1e-20);
    CHECK(k.kelvin < 1e-19);
    CHECK(k.light_speed == c0);

    auto medium = unruh_temperature_kelvin(9.81, true, 1.5);
    CHECK(medium.kelvin == doctest::Approx(1.5 * expect).epsilon(1e-12));
    CHECK(medium.light_speed == doctest::Approx(c0 / 1.5).epsilon(1e-15));
}

TEST_CASE("Unruh rate estimate")
{
    auto base = unruh_rate_estimate(accelerated(0.01, 1.0, 0.01));
    CHECK(base.valid);
    CHECK(base.temperature == doctest::Approx(0.01 / (2 * pi)).epsilon(1e-15));
    CHECK(base.cross_section == doctest::Approx(1e-4).epsilon(1e-15));
    CHECK(unruh_rate_estimate(accelerated(0.01, 1.0, 0.0)).rate == 0.0);
    CHECK(unruh_rate_estimate(accelerated(0.01, 1.0, 0.02)).rate / base.rate ==
          doctest::Approx(8.0).epsilon(1e-14));
    CHECK(unruh_rate_estimate(accelerated(0.01, 2.0, 0.01)).rate / base.rate ==
          doctest::Approx(0.25).epsilon(1e-14));
    CHECK(unruh_rate_estimate(accelerated(0.02, 1.0, 0.01)).rate / base.rate ==
          doctest::Approx(4.0).epsilon(1e-14));

    auto smeared = unruh_rate_estimate(accelerated(0.01, 1.0, 0.2));
    CHECK_FALSE(smeared.valid);
    CHECK_FALSE(smeared.warnings.empty());

    Accelerated tab;
    tab.omega = 1.0;
    std::vector<double> ts;
    std::vector<Vec3> xs;
    for (int i = 0; i <= 10; ++i) {
        double t = 0.1 * i;
        ts.push_back(t);
        xs.push_back({0.5 * 0.05 * t * t, 0.0, 0.0});
    }
    tab.trajectory = Trajectory(Tabulated{ts, xs});
    auto approx = unruh_rate_estimate(PulseProfile(0.01, MaterialParams{}, Envelope::Gaussian, tab), 0.5);
    CHECK(approx.approximate);
    CHECK(approx.acceleration == doctest::Approx(0.05).epsilon(1e-9));

    CHECK(code_of([] { unruh_rate_estimate(PulseProfile::one_parameter(0.01, 1.0)); }) ==
          ErrorCode::WrongVariant);
}
