#include "doctest.h"

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qvrad/error.hpp"
#include "qvrad/spectrum.hpp"

using namespace qvrad;
using oracle::pi;

namespace {

//! Separable transform of the anisotropic Gaussian from 1D numeric
//! Fourier integrals: exp(+i omega t) in time, exp(-i k x) in space.
Complex separable_transform(double dn, double o1, double o2, double o3, double c, double omega, Vec3 k)
{
    auto [tr, ti] = oracle::gaussian_fourier_1d(o1, omega);
    Complex out = dn * Complex(tr, ti);
    double rates[3] = {o2 / c, o3 / c, o3 / c};
    for (int i = 0; i < 3; ++i) {
        auto [xr, xi] = oracle::gaussian_fourier_1d(rates[i], -k[i]);
        out *= Complex(xr, xi);
    }
    return out;
}

GridSpec grid(std::size_t n, double L)
{
    GridSpec g;
    g.points = {n, n, n, n};
    g.half_extent = L;
    return g;
}

}  // namespace

TEST_CASE("closed-form transform at reference points")
{
    auto iso = analytic_spectrum(PulseProfile::one_parameter(1.0, 1.0));
    CHECK(iso.value(0.0, {0, 0, 0}).real() == doctest::Approx(pi * pi).epsilon(1e-14));
    CHECK(std::abs(iso.value(2.0, {0, 0, 0}) - Complex(pi * pi * std::exp(-1.0))) < 1e-13);

    auto an = analytic_spectrum(PulseProfile::anisotropic(1.0, 1.0, 2.0, 4.0, 1.5));
    double c = 1.0 / 1.5;
    CHECK(std::abs(an.value(0.0, {0, 0, 0})) == doctest::Approx(pi * pi / 32.0 * c * c * c).epsilon(1e-14));
}

TEST_CASE("closed-form transform matches separable numeric integrals")
{
    double c = 1.0 / 1.3;
    auto p = PulseProfile::anisotropic(0.02, 0.8, 1.7, 2.4, 1.3);
    auto s = analytic_spectrum(p);
    for (double omega : {0.0, 0.7, -1.9})
        for (Vec3 k : {Vec3{0, 0, 0}, Vec3{1.1, -0.4, 0.6}, Vec3{-2.0, 3.0, 0.5}}) {
            Complex ref = separable_transform(0.02, 0.8, 1.7, 2.4, c, omega, k);
            CHECK(std::abs(s.value(omega, k) - ref) <= 1e-10 * std::abs(s.value(0, {0, 0, 0})));
        }
}

TEST_CASE("translation multiplies by a pure phase")
{
    StaticAnisotropic shifted{1.0, 1.5, 0.7, 0.4, {0.3, -0.2, 1.0}};
    PulseProfile p(0.01, {}, Envelope::Gaussian, shifted);
    auto s0 = analytic_spectrum(PulseProfile::anisotropic(0.01, 1.0, 1.5, 0.7));
    auto s1 = analytic_spectrum(p);
    Vec3 k{0.4, 1.2, -0.3};
    double omega = 0.9;
    Complex ratio = s1.value(omega, k) / s0.value(omega, k);
    CHECK(std::abs(ratio) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::arg(ratio) == doctest::Approx(std::remainder(omega * 0.4 - dot(k, shifted.center), 2 * pi)));
}

TEST_CASE("amplitude scales linearly in delta_n")
{
    auto a = analytic_spectrum(PulseProfile::anisotropic(0.01, 1.0, 2.0, 0.5));
    auto b = analytic_spectrum(PulseProfile::anisotropic(0.03, 1.0, 2.0, 0.5));
    for (double w : {0.0, 1.0, 2.5})
        CHECK(std::abs(b.value(w, {0.3, 0.1, 0.2}) - 3.0 * a.value(w, {0.3, 0.1, 0.2})) <
              1e-15 * std::abs(b.value(0, {0, 0, 0})));
}

TEST_CASE("FFT spectrum agrees with the closed form")
{
    auto p = PulseProfile::anisotropic(0.01, 1.0, 2.0, 0.5, 1.5);
    auto s = numeric_spectrum(p, grid(45, 6.0));
    REQUIRE(s.kind() == SpectralAmplitude::Kind::Grid);
    auto exact = analytic_spectrum(p);
    CHECK(max_relative_error(*s.grid(), *exact.closed_form()) <= 1e-6);
    CHECK(hermitian_error(*s.grid()) <= 1e-12);
    auto parseval = parseval_check(p, s);
    CHECK(parseval.discrepancy <= 1e-6);
    CHECK_FALSE(parseval.flagged);
    CHECK(std::abs(s.grid()->peak() - std::abs(exact.value(0, {0, 0, 0}))) <= 1e-10 * s.grid()->peak());

    // on-lattice lookups are exact; between nodes multilinear
    // interpolation is second order in the spacing (about 0.5 here)
    auto const& ax = s.grid()->axes();
    Vec3 node{3 * ax[1].spacing, -ax[2].spacing, 2 * ax[3].spacing};
    CHECK(std::abs(s.value(ax[0].spacing, node) - s.grid()->at({1, 3, -1, 2})) < 1e-15 * s.grid()->peak());
    Complex vi = s.value(0.13, {0.05, -0.1, 0.02});
    CHECK(std::abs(vi - exact.value(0.13, {0.05, -0.1, 0.02})) < 5e-2 * s.grid()->peak());
}

TEST_CASE("FFT spectrum keeps the time-shift phase and modulus")
{
    StaticAnisotropic shifted{1.0, 1.0, 1.0, 0.5, {}};
    PulseProfile p(0.01, {}, Envelope::Gaussian, shifted);
    auto s = numeric_spectrum(p, grid(45, 6.0));
    auto s0 = numeric_spectrum(PulseProfile::one_parameter(0.01, 1.0), grid(45, 6.0));
    auto const& g = *s.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.values().size(); ++i)
        worst = std::max(worst, std::abs(std::abs(g.values()[i]) - std::abs(s0.grid()->values()[i])));
    CHECK(worst <= 1e-8 * g.peak());
}

TEST_CASE("larger extent leaves the zero mode unchanged")
{
    auto p = PulseProfile::one_parameter(0.01, 1.0);
    auto a = numeric_spectrum(p, grid(45, 6.0));
    auto b = numeric_spectrum(p, grid(61, 8.0));
    Complex za = a.grid()->at({0, 0, 0, 0});
    Complex zb = b.grid()->at({0, 0, 0, 0});
    CHECK(std::abs(za - zb) <= 1e-10 * std::abs(zb));
}

TEST_CASE("FFT of the polynomial envelope is Hermitian and satisfies Parseval")
{
    auto base = PulseProfile::one_parameter(0.01, 1.0);
    PulseProfile p(0.01, {}, Envelope::GaussianPolynomial, base.shape());
    auto s = numeric_spectrum(p, grid(47, 6.0));
    CHECK(hermitian_error(*s.grid()) <= 1e-12);
    CHECK(parseval_check(p, s).discrepancy <= 1e-6);
    CHECK_THROWS_AS(analytic_spectrum(p), Error);
}

TEST_CASE("Parseval on closed forms is exact")
{
    auto p = PulseProfile::anisotropic(0.3, 0.5, 2.0, 3.0, 1.4);
    CHECK(parseval_check(p, analytic_spectrum(p)).discrepancy <= 1e-10);
}

TEST_CASE("truncated grid is flagged by Parseval")
{
    auto p = PulseProfile::one_parameter(0.01, 1.0);
    for (double L : {2.0, 1.5}) {
        GridSpec g = grid(45, L);
        g.enforce_coverage = false;
        auto s = numeric_spectrum(p, g);
        auto r = parseval_check(p, s);
        CHECK(r.flagged);

        // By discrete Parseval the grid sum equals the real-space Riemann
        // sum over the truncated box, which factorizes per axis.
        double h = L / 22.0;
        double axis = 0.0;
        for (int i = -22; i <= 22; ++i)
            axis += std::exp(-2.0 * (i * h) * (i * h)) * h;
        double expected = 1.0 - std::pow(axis / std::sqrt(pi / 2.0), 4);
        CHECK(r.discrepancy == doctest::Approx(std::abs(expected)).epsilon(1e-6));
        if (L == 1.5)
            CHECK(r.discrepancy > 1e-3);
    }
}

TEST_CASE("coverage and resolution errors")
{
    auto p = PulseProfile::one_parameter(0.01, 1.0);
    CHECK_THROWS_AS(numeric_spectrum(p, grid(45, 4.0)), Error);
    CHECK_THROWS_AS(numeric_spectrum(p, grid(21, 6.0)), Error);
    CHECK_THROWS_AS(numeric_spectrum(p, grid(44, 6.0)), Error);
    CHECK_THROWS_AS(numeric_spectrum(PulseProfile::moving(0.01, 1.0, {0.5, 0, 0}), grid(45, 6.0)), Error);
    try {
        numeric_spectrum(p, grid(21, 6.0));
    } catch (Error const& e) {
        CHECK(e.code() == ErrorCode::Resolution);
    }
}

TEST_CASE("lookups outside the lattice report Extent")
{
    auto s = numeric_spectrum(PulseProfile::one_parameter(0.01, 1.0), grid(45, 6.0));
    double far = 2.0 * s.grid()->axes()[0].max_value();
    CHECK_FALSE(s.try_value(far, {0, 0, 0}).has_value());
    try {
        s.value(far, {0, 0, 0});
        FAIL("expected an Extent error");
    } catch (Error const& e) {
        CHECK(e.code() == ErrorCode::Extent);
    }
}

TEST_CASE("binary layout round-trips")
{
    auto s = numeric_spectrum(PulseProfile::anisotropic(0.01, 1.0, 1.5, 0.8), grid(45, 6.0));
    std::stringstream buf;
    write_grid_binary(buf, *s.grid(), "config_hash=abc");
    std::string meta;
    auto back = read_grid_binary(buf, &meta);
    CHECK(meta == "config_hash=abc");
    REQUIRE(back.values().size() == s.grid()->values().size());
    CHECK(back.values() == s.grid()->values());
    for (std::size_t a = 0; a < 4; ++a) {
        CHECK(back.axes()[a].count == s.grid()->axes()[a].count);
        CHECK(back.axes()[a].spacing == s.grid()->axes()[a].spacing);
    }
    std::stringstream bad("not a spectrum");
    CHECK_THROWS_AS(read_grid_binary(bad), Error);
}

TEST_CASE("moving spectrum")
{
    auto m = moving_spectrum(PulseProfile::moving(1.0, 1.0, {0.0, 0.0, 0.0}));
    CHECK(m.spatial({0, 0, 0}).real() == doctest::Approx(std::pow(std::sqrt(pi), 3)).epsilon(1e-14));
    CHECK(m.constraint_frequency({1, 2, 3}) == 0.0);

    // spatial part of the resting pulse is the static transform divided by
    // the temporal Gaussian integral
    auto s = analytic_spectrum(PulseProfile::anisotropic(1.0, 1.0, 1.0, 1.0));
    Vec3 k{0.3, -0.7, 1.1};
    CHECK(std::abs(m.spatial(k)) == doctest::Approx(std::abs(s.value(0.0, k)) / std::sqrt(pi)).epsilon(1e-13));

    PulseProfile shifted(1.0, {}, Envelope::Gaussian, UniformlyMoving{1.0, {0.2, 0, 0}, {1.0, 2.0, -1.0}});
    auto ms = moving_spectrum(shifted);
    CHECK(std::abs(ms.spatial(k)) == doctest::Approx(std::abs(m.spatial(k))).epsilon(1e-14));
    CHECK(ms.constraint_frequency({1.0, 5.0, 5.0}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(moving_spectrum(PulseProfile::one_parameter(0.01, 1.0)), Error);
}
