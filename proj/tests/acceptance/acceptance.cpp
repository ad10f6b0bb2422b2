// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Details for each criterion go to stdout beneath its line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qvrad/analogue.hpp"
#include "qvrad/cli/config.hpp"
#include "qvrad/cli/execute.hpp"
#include "qvrad/error.hpp"
#include "qvrad/radiation.hpp"
#include "qvrad/scaling.hpp"
#include "qvrad/spectrum.hpp"

using namespace qvrad;
namespace fs = std::filesystem;

namespace {

constexpr double pi = 3.141592653589793;

struct Criterion
{
    std::vector<std::string> notes;
    bool pass = true;

    void check(bool ok, std::string const& what)
    {
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        pass = pass && ok;
    }
};

std::string fmt(char const* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> geometric(double lo, double ratio, std::size_t n)
{
    std::vector<double> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(lo * std::pow(ratio, static_cast<double>(i)));
    return v;
}

Verdict sweep_verdict(Criterion& c, SweepSpec const& spec, SweepTable* out = nullptr)
{
    auto table = run_sweep(spec);
    auto fit = fit_exponent(table);
    auto v = judge(table, fit, spec.integrator.method);
    std::string flat = v.flatness ? fmt(", max/min %.5f", *v.flatness) : std::string();
    c.check(v.pass, fmt("%s %s vs %s: fitted %.4f (expected %g +- %g), R^2 %.6f", to_string(spec.regime).c_str(),
                        to_string(spec.observable).c_str(), to_string(spec.parameter).c_str(), v.fitted,
                        v.expected, v.tolerance, v.r_squared) +
                        flat);
    if (out != nullptr)
        *out = table;
    return v;
}

//------------------------------------------------------------------------//

void one_parameter_probability(Criterion& c)
{
    SweepSpec s;
    s.values = {0.5, 1.0, 2.0, 4.0};
    auto v = sweep_verdict(c, s);
    c.check(v.flatness && *v.flatness <= 1.02, "flatness max/min <= 1.02");
}

void one_parameter_energy(Criterion& c)
{
    SweepSpec s;
    s.values = {0.5, 1.0, 2.0, 4.0};
    s.observable = SweepObservable::MeanEnergy;
    sweep_verdict(c, s);
}

void point_like(Criterion& c)
{
    SweepSpec s;
    s.base = PulseProfile::anisotropic(0.01, 0.002, 1.0, 1.0);
    s.regime = ScalingRegime::PointLike;
    s.parameter = SweepParameter::Omega1;
    s.values = geometric(0.002, 2.0, 5);
    sweep_verdict(c, s);
    s.observable = SweepObservable::TotalEnergy;
    SweepTable energy;
    sweep_verdict(c, s, &energy);

    double lo = INFINITY, hi = 0.0, mean = 0.0;
    std::vector<double> ratios;
    for (auto const& row : energy.rows) {
        double mono = monopole_energy_estimate(sweep_profile(s, row.parameter)).value;
        ratios.push_back(row.value / mono);
        mean += ratios.back() / static_cast<double>(energy.rows.size());
    }
    double worst = 0.0;
    for (double r : ratios) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        worst = std::max(worst, std::abs(r / mean - 1.0));
    }
    c.check(worst <= 0.1, fmt("total_energy / monopole estimate: %.6g .. %.6g, max deviation from mean %.2e", lo,
                              hi, worst));
}

void cosmological(Criterion& c)
{
    SweepSpec s;
    s.base = PulseProfile::anisotropic(1e-4, 1.0, 1.0 / 480, 1.0 / 480);
    s.regime = ScalingRegime::Cosmological;
    s.parameter = SweepParameter::Omega2;
    s.values = {1.0 / 480, 1.0 / 240, 1.0 / 120, 1.0 / 60, 1.0 / 30};
    sweep_verdict(c, s);
    IntegratorSpec quad;
    for (double o2 : s.values) {
        auto p = sweep_profile(s, o2);
        auto corr = pair_correlation(analytic_spectrum(p), p.n0(), quad, 50);
        c.check(corr.median <= 0.1, fmt("Omega2 = 1/%.0f: median chi %.4g <= 0.1", 1.0 / o2, corr.median));
    }
}

void needle(Criterion& c)
{
    SweepSpec s;
    s.base = PulseProfile::anisotropic(0.01, 1.0, 1.0 / 300, 100.0);
    s.regime = ScalingRegime::Needle;
    s.parameter = SweepParameter::Omega2;
    s.values = {1.0 / 300, 1.0 / 150, 1.0 / 75, 1.0 / 37.5};
    sweep_verdict(c, s);
    s.base = PulseProfile::anisotropic(0.01, 1.0, 1.0 / 100, 30.0);
    s.parameter = SweepParameter::Omega3;
    s.values = geometric(30.0, 2.0, 5);
    sweep_verdict(c, s);
}

void moving(Criterion& c)
{
    double n0 = 1.5;
    double light = 1.0 / n0;
    IntegratorSpec quad;
    for (double f : {0.5, 0.9, 0.99}) {
        auto p = PulseProfile::moving(0.01, 1.0, {f * light, 0, 0}, n0);
        auto r = emission_rate(moving_spectrum(p), n0, quad);
        c.check(r.rate == 0.0 && r.forbidden, fmt("v = %.2f c: rate %g (%s)", f, r.rate, r.reason.c_str()));
    }

    SweepSpec s;
    s.base = PulseProfile::moving(0.01, 1.0, {1.2 * light, 0, 0}, n0);
    s.regime = ScalingRegime::MovingSuperluminal;
    s.parameter = SweepParameter::Omega;
    s.observable = SweepObservable::Rate;
    s.values = {0.5, 1.0, 2.0, 4.0};
    sweep_verdict(c, s);

    s.parameter = SweepParameter::VMinusC;
    s.observable = SweepObservable::ThetaMax;
    s.base = PulseProfile::moving(0.01, 1.0, {light, 0, 0}, n0);
    s.values.clear();
    for (double f : {1.05, 1.1, 1.2, 1.4})
        s.values.push_back((f - 1.0) * light);
    sweep_verdict(c, s);

    s.observable = SweepObservable::Rate;
    bool monotone = true;
    std::string list;
    double previous = 0.0;
    for (double value : s.values) {
        double rate = evaluate_point(s, value).value;
        list += fmt(" %.4g", rate);
        monotone = monotone && rate > previous;
        previous = rate;
    }
    c.check(monotone,
            "rate decreases monotonically as v approaches c from above:" + list);
}

void oracle_agreement(Criterion& c)
{
    IntegratorSpec quad;
    auto agree = [&](std::string const& label, double q, McEstimate const& m) {
        double diff = std::abs(m.value - q);
        bool ok = diff <= 3.0 * m.std_error && diff <= 0.02 * std::abs(q);
        c.check(ok, fmt("%-28s quad %.6e  mc %.6e +- %.1e  (%.2f sigma, %.2e rel)", label.c_str(), q, m.value,
                        m.std_error, diff / m.std_error, diff / std::abs(q)));
    };
    struct Case
    {
        char const* name;
        PulseProfile p;
    };
    std::vector<Case> cases{
        {"isotropic", PulseProfile::one_parameter(0.01, 1.0)},
        {"isotropic n0=1.5", PulseProfile::one_parameter(0.01, 1.0, 1.5)},
        {"anisotropic", PulseProfile::anisotropic(0.01, 1.0, 2.0, 0.5, 1.5)},
        {"point-like", PulseProfile::anisotropic(0.01, 0.02, 1.0, 1.0)},
        {"cosmological", PulseProfile::anisotropic(0.01, 1.0, 1.0 / 30, 1.0 / 30)},
        {"needle", PulseProfile::anisotropic(0.01, 1.0, 1.0 / 100, 100.0)},
    };
    std::uint64_t seed = 20240611;
    std::size_t n = std::size_t{1} << 20;
    for (auto const& k : cases) {
        auto s = analytic_spectrum(k.p);
        double P = total_probability(s, k.p.n0(), quad).value;
        double E = mean_photon_energy(s, k.p.n0(), quad).value;
        agree(std::string(k.name) + " P", P, mc_oracle(s, k.p.n0(), seed, n, Observable::Probability));
        agree(std::string(k.name) + " E", E, mc_oracle(s, k.p.n0(), seed + 1, n, Observable::MeanEnergy));
        double ratio = total_probability(analytic_spectrum(k.p.with_delta_n(0.02)), k.p.n0(), quad).value / P;
        c.check(std::abs(ratio - 4.0) <= 4.0 * 10.0 * quad.tolerance,
                fmt("%-28s P(2 dn) / P(dn) = %.12f", k.name, ratio));
    }
    for (double f : {1.1, 1.4}) {
        double n0 = 1.5;
        auto p = PulseProfile::moving(0.01, 1.0, {f / n0, 0, 0}, n0);
        auto fs = moving_spectrum(p);
        double rate = emission_rate(fs, n0, quad).rate;
        agree(fmt("rate v = %.1f c", f), rate, mc_oracle(fs, n0, seed + 2, std::size_t{1} << 22, Observable::Rate));
        double ratio = emission_rate(moving_spectrum(p.with_delta_n(0.02)), n0, quad).rate / rate;
        c.check(std::abs(ratio - 4.0) <= 4.0 * 10.0 * quad.tolerance, fmt("rate v = %.1f c: dn doubling ratio %.12f", f, ratio));
    }
}

void spectrum_integrity(Criterion& c)
{
    for (auto const& p : {PulseProfile::one_parameter(0.01, 1.0), PulseProfile::anisotropic(0.01, 1.0, 2.0, 0.5, 1.5)}) {
        auto grid = numeric_spectrum(p);
        auto exact = analytic_spectrum(p);
        double fft = max_relative_error(*grid.grid(), *exact.closed_form());
        double parseval = parseval_check(p, grid).discrepancy;
        double herm = hermitian_error(*grid.grid());
        c.check(fft <= 1e-6, fmt("FFT vs closed form max relative error %.3e <= 1e-6", fft));
        c.check(parseval <= 1e-6, fmt("Parseval discrepancy %.3e <= 1e-6", parseval));
        c.check(herm <= 1e-12, fmt("Hermitian symmetry error %.3e <= 1e-12", herm));
    }
}

void analogue(Criterion& c)
{
    c.check(classify_regime(1.5, 0.1, 0.60).regime == LuminalRegime::SubLuminal, "v = 0.60: sub-luminal");
    c.check(classify_regime(1.5, 0.1, 0.64).regime == LuminalRegime::TransLuminal, "v = 0.64: trans-luminal");
    c.check(classify_regime(1.5, 0.1, 0.70).regime == LuminalRegime::SuperLuminal, "v = 0.70: super-luminal");

    // horizon pairs on unimodal pulses, with analytic vs finite-difference kappa
    double worst_fd = 0.0;
    bool pairs = true;
    for (double frac : {0.1, 0.5, 0.9}) {
        for (double omega : {0.5, 1.0, 3.0}) {
            double n0 = 1.5, dn = 0.1;
            double v = 1.0 / (n0 + frac * dn);
            auto p = PulseProfile::moving(dn, omega, {v, 0, 0}, n0);
            auto hs = find_horizons(p, v);
            pairs = pairs && hs.size() == 2 && hs[0].type == HorizonType::WhiteHole &&
                    hs[1].type == HorizonType::BlackHole;
            auto speed = comoving_speed_profile(p);
            double h = 1e-4 * p.light_speed() / omega;
            for (auto const& hz : hs) {
                double fd = std::abs(speed.speed(hz.position + h) - speed.speed(hz.position - h)) / (2 * h);
                worst_fd = std::max(worst_fd, std::abs(hz.surface_gravity / fd - 1.0));
            }
        }
    }
    c.check(pairs, "two horizons per trans-luminal pulse, white hole behind, black hole in front");
    c.check(worst_fd <= 1e-6, fmt("analytic vs finite-difference kappa: worst relative error %.2e", worst_fd));
    bool sub_none = false;
    try {
        find_horizons(PulseProfile::moving(0.1, 1.0, {0.6, 0, 0}, 1.5), 0.6);
    } catch (Error const& e) {
        sub_none = e.code() == ErrorCode::NoHorizon;
    }
    c.check(sub_none, "sub-luminal pulse: no horizon");

    // T doubles with Omega and with dn at fixed speed and fractional crossing depth
    SweepSpec s;
    s.base = PulseProfile::moving(0.1, 1.0, {0.64, 0, 0}, 1.5);
    s.regime = ScalingRegime::Hawking;
    s.observable = SweepObservable::HawkingRate;
    auto temperature = [&](SweepParameter par, double value) {
        s.parameter = par;
        return horizon_report(sweep_profile(s, value)).temperature();
    };
    double t0 = horizon_report(s.base).temperature();
    double t_omega = temperature(SweepParameter::Omega, 2.0);
    double t_dn = temperature(SweepParameter::DeltaN, 0.2);
    c.check(std::abs(t_omega / t0 - 2.0) <= 1e-9, fmt("T(2 Omega) / T = %.12f", t_omega / t0));
    c.check(std::abs(t_dn / t0 - 2.0) <= 1e-9, fmt("T(2 dn) / T = %.12f", t_dn / t0));

    auto exact_exponent = [&](SweepSpec spec, std::vector<double> values) {
        spec.values = std::move(values);
        sweep_verdict(c, spec);
    };
    s.parameter = SweepParameter::Omega;
    exact_exponent(s, geometric(0.5, 2.0, 4));
    s.parameter = SweepParameter::DeltaN;
    exact_exponent(s, geometric(0.0125, 2.0, 4));
    Accelerated acc;
    acc.omega = 10.0;
    acc.trajectory = Trajectory(UniformAcceleration{{0.01, 0, 0}, {}, {}});
    SweepSpec u;
    u.base = PulseProfile(0.01, MaterialParams{}, Envelope::Gaussian, acc);
    u.regime = ScalingRegime::Unruh;
    u.observable = SweepObservable::UnruhRate;
    u.parameter = SweepParameter::Omega;
    exact_exponent(u, geometric(10.0, 2.0, 4));
    u.parameter = SweepParameter::Acceleration;
    exact_exponent(u, geometric(0.01, 2.0, 4));
    u.parameter = SweepParameter::DeltaN;
    exact_exponent(u, geometric(0.001, 2.0, 4));

    double hbar = 1.054571817e-34, kb = 1.380649e-23, c0 = 299792458.0;
    double expect = hbar * 9.81 / (2 * pi * kb * c0);
    double kelvin = unruh_temperature_kelvin(9.81).kelvin;
    c.check(std::abs(kelvin / expect - 1.0) <= 5e-5 && kelvin > 1e-20 && kelvin < 1e-19,
            fmt("Unruh temperature at 9.81 m/s^2: %.4e K (hbar a / 2 pi k_B c0 = %.4e K)", kelvin, expect));
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void determinism(Criterion& c, fs::path const& configs)
{
    auto root = fs::temp_directory_path() / "qvrad-acceptance";
    for (auto name : {"radiate_isotropic.yaml", "validate_static.yaml", "validate_moving.yaml",
                      "sweep_cosmological.yaml", "rate_superluminal.yaml"}) {
        auto config = cli::parse_config(slurp(configs / name));
        std::string first;
        bool same = true;
        int exit_code = 0;
        for (unsigned workers : {1u, 2u, 4u}) {
            config.integrator.workers = workers;
            auto dir = root / (std::string(name) + "-" + std::to_string(workers));
            fs::remove_all(dir);
            fs::create_directories(dir);
            exit_code = std::max(exit_code, cli::execute(config, dir).exit_code);
            auto text = slurp(dir / "report.json");
            if (first.empty())
                first = text;
            same = same && !text.empty() && text == first;
        }
        c.check(same && exit_code == 0, fmt("%s: report.json identical for 1, 2 and 4 workers", name));
    }
}

}  // namespace

int main(int argc, char** argv)
{
    fs::path configs = argc > 1 ? fs::path(argv[1]) : fs::path("configs");
    struct Entry
    {
        char const* title;
        std::function<void(Criterion&)> run;
    };
    std::vector<Entry> entries{
        {"one-parameter pulse: P independent of Omega", one_parameter_probability},
        {"one-parameter pulse: typical energy linear in Omega", one_parameter_energy},
        {"point-like pulse: P ~ Omega1^6, energy ~ Omega1^7, monopole ratio", point_like},
        {"cosmological regime: P ~ Omega2^-3, back-to-back pairs", cosmological},
        {"needle pulse: P ~ Omega2^-1 Omega3^-4", needle},
        {"moving pulse: kinematics, rate ~ Omega, emission cone", moving},
        {"amplitude oracle: quadrature vs Monte Carlo, dn quadratic", oracle_agreement},
        {"spectrum integrity: FFT, Parseval, Hermitian symmetry", spectrum_integrity},
        {"analogue layer: regimes, horizons, temperatures, estimators", analogue},
        {"determinism across worker counts", [&](Criterion& c) { determinism(c, configs); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Criterion c;
        auto start = std::chrono::steady_clock::now();
        try {
            entries[i].run(c);
        } catch (std::exception const& e) {
            c.check(false, std::string("error: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  criterion %2zu: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", i + 1, entries[i].title, secs);
        for (auto const& n : c.notes)
            std::printf("          %s\n", n.c_str());
        std::fflush(stdout);
        failed += c.pass ? 0 : 1;
    }
    std::printf("%zu of %zu criteria passed\n", entries.size() - static_cast<std::size_t>(failed), entries.size());
    return failed == 0 ? 0 : 1;
}
