#include "qvrad/cli/execute.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qvrad/analogue.hpp"
#include "qvrad/constants.hpp"
#include "qvrad/error.hpp"
#include "qvrad/radiation.hpp"
#include "qvrad/report_io.hpp"
#include "qvrad/scaling.hpp"
#include "qvrad/spectrum.hpp"
#include "qvrad/version.hpp"

namespace qvrad::cli {

namespace fs = std::filesystem;

namespace {

Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

struct Context
{
    RunConfig const& config;
    fs::path dir;
    std::string hash;
    RunResult result;

    bool wants(std::string const& format) const
    {
        auto const& f = config.output.formats;
        return std::find(f.begin(), f.end(), format) != f.end();
    }

    Json header() const
    {
        Json j;
        j["tool_version"] = std::string(tool_version);
        j["config_hash"] = hash;
        j["command"] = to_string(config.command);
        return j;
    }

    std::string comment() const
    {
        return "config_hash=" + hash + " tool_version=" + std::string(tool_version);
    }

    std::ofstream open(std::string const& name, bool binary = false)
    {
        std::ofstream os(dir / name, binary ? std::ios::binary : std::ios::out);
        if (!os)
            throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
        result.files.push_back(name);
        return os;
    }

    void write_json(std::string const& name, Json const& j)
    {
        auto os = open(name);
        os << j.dump(2) << '\n';
    }
};

PulseProfile checked_profile(Context const& ctx, Json& report)
{
    PulseProfile p = build_profile(ctx.config.profile);
    auto warnings = validate_profile(p);
    if (ctx.config.profile.intensity) {
        double n2 = ctx.config.profile.kerr_n2.value_or(constants::fused_silica_n2);
        auto kerr = kerr_delta_n(n2, *ctx.config.profile.intensity);
        warnings.insert(warnings.end(), kerr.warnings.begin(), kerr.warnings.end());
    }
    report["profile"] = Json{{"variant", ctx.config.profile.variant},
                             {"delta_n", number(p.delta_n())},
                             {"n0", number(p.n0())},
                             {"envelope", to_string(p.envelope())}};
    if (auto const* st = std::get_if<StaticAnisotropic>(&p.shape()))
        report["profile"]["static_regime"] = to_string(classify_static_regime(*st));
    report["warnings"] = to_json(warnings);
    return p;
}

GridSpec grid_spec(SpectrumConfig const& sc)
{
    GridSpec g;
    for (std::size_t i = 0; i < 4; ++i)
        g.points[i] = static_cast<std::size_t>(sc.points[i]);
    g.half_extent = sc.half_extent;
    return g;
}

SpectralAmplitude static_spectrum(Context const& ctx, PulseProfile const& p)
{
    if (ctx.config.spectrum.mode == "analytic")
        return analytic_spectrum(p);
    return numeric_spectrum(p, grid_spec(ctx.config.spectrum));
}

int run_spectrum(Context& ctx)
{
    Json report = ctx.header();
    PulseProfile p = checked_profile(ctx, report);
    report["convention"] = std::string(fourier_convention);
    if (p.is<UniformlyMoving>()) {
        auto fs_ = moving_spectrum(p);
        report["spectrum"] = Json{{"kind", "factorized_moving"},
                                  {"spatial_peak", number(fs_.spatial_peak())},
                                  {"spatial_extent", number(fs_.spatial_extent())},
                                  {"velocity", {fs_.velocity[0], fs_.velocity[1], fs_.velocity[2]}}};
        ctx.write_json("report.json", report);
        return exit_ok;
    }
    if (ctx.config.spectrum.mode == "analytic") {
        auto s = analytic_spectrum(p);
        report["spectrum"] = Json{{"kind", "closed_form"}, {"peak", number(s.closed_form()->peak())}};
        report["parseval"] = to_json(parseval_check(p, s));
        ctx.write_json("report.json", report);
        return exit_ok;
    }
    auto s = numeric_spectrum(p, grid_spec(ctx.config.spectrum));
    auto const& g = *s.grid();
    Json axes = Json::array();
    for (auto const& a : g.axes())
        axes.push_back(Json{{"count", a.count}, {"spacing", number(a.spacing)}, {"max", number(a.max_value())}});
    report["spectrum"] = Json{{"kind", "grid"}, {"peak", number(g.peak())}, {"axes", axes}};
    report["hermitian_error"] = number(hermitian_error(g));
    report["parseval"] = to_json(parseval_check(p, s));
    if (p.envelope() == Envelope::Gaussian)
        report["closed_form_error"] = number(max_relative_error(g, *analytic_spectrum(p).closed_form()));
    if (ctx.wants("bin")) {
        auto os = ctx.open("spectrum.bin", true);
        write_grid_binary(os, g, ctx.comment());
    }
    if (ctx.wants("csv")) {
        auto os = ctx.open("spectrum.csv");
        os << "# " << ctx.comment() << '\n';
        write_grid_csv(os, g);
    }
    ctx.write_json("report.json", report);
    return exit_ok;
}

int run_radiate(Context& ctx)
{
    Json report = ctx.header();
    PulseProfile p = checked_profile(ctx, report);
    if (!p.is<StaticAnisotropic>())
        throw Error(ErrorCode::WrongVariant, "radiate needs a static pulse; use rate for moving pulses");
    auto s = static_spectrum(ctx, p);
    auto spec = build_integrator(ctx.config.integrator);
    auto const& rc = ctx.config.radiate;
    EmissionReport r;
    if (rc.angular_bins > 0 || rc.correlation_bins > 0) {
        r = radiate(s, p.n0(), spec, std::max<std::size_t>(rc.angular_bins, 1),
                    std::max<std::size_t>(rc.correlation_bins, 1));
    } else {
        r.total_probability = total_probability(s, p.n0(), spec);
        r.total_energy = total_energy(s, p.n0(), spec);
        if (p.delta_n() > 0.0)
            r.mean_photon_energy = mean_photon_energy(s, p.n0(), spec);
        r.perturbative_warning = r.total_probability.value > probability_warn_threshold;
    }
    report["emission"] = to_json(r);
    auto mono = monopole_energy_estimate(p);
    report["monopole_energy_estimate"] = Json{{"value", number(mono.value)}, {"warnings", to_json(mono.warnings)}};
    if (ctx.wants("csv")) {
        if (rc.angular_bins > 0) {
            auto os = ctx.open("angular.csv");
            write_histogram_csv(os, r.angular, ctx.comment());
        }
        if (rc.correlation_bins > 0 && r.correlation.bins() > 0) {
            auto os = ctx.open("correlation.csv");
            write_histogram_csv(os, r.correlation, ctx.comment());
        }
    }
    ctx.write_json("report.json", report);
    return exit_ok;
}

int run_rate(Context& ctx)
{
    Json report = ctx.header();
    PulseProfile p = checked_profile(ctx, report);
    auto r = emission_rate(moving_spectrum(p), p.n0(), build_integrator(ctx.config.integrator),
                           static_cast<std::size_t>(ctx.config.rate.angle_bins));
    report["rate"] = to_json(r);
    if (ctx.wants("csv")) {
        auto os = ctx.open("angle.csv");
        write_histogram_csv(os, r.angle_table, ctx.comment());
    }
    ctx.write_json("report.json", report);
    return exit_ok;
}

int run_sweep_command(Context& ctx)
{
    Json report = ctx.header();
    checked_profile(ctx, report);
    auto spec = build_sweep(ctx.config);
    auto table = run_sweep(spec);
    auto fit = fit_exponent(table);
    auto verdict = judge(table, fit, spec.integrator.method);
    report["sweep"] = to_json(table);
    report["fit"] = to_json(fit);
    bool beyond = false;
    if (spec.observable == SweepObservable::Probability)
        for (auto const& row : table.rows)
            beyond = beyond || row.value > probability_warn_threshold;
    report["perturbative_warning"] = beyond;
    if (ctx.wants("csv")) {
        auto os = ctx.open("sweep.csv");
        write_sweep_csv(os, table, ctx.comment());
    }
    Json v = ctx.header();
    v["verdict"] = to_json(verdict);
    ctx.write_json("verdict.json", v);
    ctx.write_json("report.json", report);
    return verdict.pass ? exit_ok : exit_check_failed;
}

int run_horizon(Context& ctx)
{
    Json report = ctx.header();
    PulseProfile p = checked_profile(ctx, report);
    auto geometry = ctx.config.horizon.geometry == "1d" ? HawkingGeometry::OneD : HawkingGeometry::ThreeD;
    auto h = horizon_report(p, geometry);
    report["horizon"] = to_json(h);
    if (!h.horizons.empty())
        report["hawking"] = to_json(hawking_rate_estimate(h));
    ctx.write_json("report.json", report);
    return exit_ok;
}

int run_unruh(Context& ctx)
{
    Json report = ctx.header();
    PulseProfile p = checked_profile(ctx, report);
    auto const& uc = ctx.config.unruh;
    report["unruh"] = to_json(unruh_rate_estimate(p, uc.time));
    if (uc.acceleration_si)
        report["kelvin"] = to_json(unruh_temperature_kelvin(*uc.acceleration_si, uc.medium_frame, p.n0()));
    ctx.write_json("report.json", report);
    return exit_ok;
}

//---------------------------------------------------------------------------//
// Self-test
//---------------------------------------------------------------------------//

struct Check
{
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
    std::string detail;
};

Json to_json(Check const& c)
{
    return Json{{"name", c.name}, {"value", number(c.value)}, {"limit", number(c.limit)},
                {"pass", c.pass}, {"detail", c.detail}};
}

Check at_most(std::string name, double value, double limit)
{
    return {std::move(name), value, limit, value <= limit, ""};
}

//! Quadrature and Monte Carlo must agree within 3 standard errors and 2%.
Check agreement(std::string name, double quad, McEstimate const& mc)
{
    double diff = std::abs(quad - mc.value);
    double rel = quad != 0.0 ? diff / std::abs(quad) : diff;
    Check c{std::move(name), rel, 0.02, false, ""};
    c.pass = diff <= 3.0 * mc.std_error && rel <= 0.02;
    std::ostringstream os;
    os.precision(6);
    os << "quadrature " << quad << ", monte carlo " << mc.value << " +- " << mc.std_error;
    c.detail = os.str();
    return c;
}

std::vector<Check> static_checks(Context const& ctx, PulseProfile const& p)
{
    std::vector<Check> checks;
    IntegratorSpec quad = build_integrator(ctx.config.integrator);
    quad.method = IntegrationMethod::Quadrature;
    std::uint64_t seed = ctx.config.integrator.seed.value_or(1);
    auto n = static_cast<std::size_t>(ctx.config.integrator.samples);
    unsigned workers = ctx.config.integrator.workers;

    if (p.envelope() == Envelope::Gaussian) {
        auto exact = analytic_spectrum(p);
        auto grid = numeric_spectrum(p, grid_spec(ctx.config.spectrum));
        checks.push_back(at_most("fft_vs_closed_form", max_relative_error(*grid.grid(), *exact.closed_form()), 1e-6));
        checks.push_back(at_most("parseval", parseval_check(p, grid).discrepancy, parseval_tolerance));
        checks.push_back(at_most("hermitian_symmetry", hermitian_error(*grid.grid()), 1e-12));

        double P = total_probability(exact, p.n0(), quad).value;
        checks.push_back(agreement("oracle_probability", P,
                                   mc_oracle(exact, p.n0(), seed, n, Observable::Probability, workers)));
        if (p.delta_n() > 0.0) {
            double E = mean_photon_energy(exact, p.n0(), quad).value;
            checks.push_back(agreement("oracle_mean_energy", E,
                                       mc_oracle(exact, p.n0(), seed, n, Observable::MeanEnergy, workers)));
            double P2 = total_probability(analytic_spectrum(p.with_delta_n(2.0 * p.delta_n())), p.n0(), quad).value;
            checks.push_back(at_most("delta_n_quadratic", std::abs(P2 / P - 4.0), 4.0 * 10.0 * quad.tolerance));
        }
    } else {
        checks.push_back({"closed_form_checks", 0.0, 0.0, true, "skipped: envelope has no closed-form transform"});
    }
    return checks;
}

std::vector<Check> moving_checks(Context const& ctx, PulseProfile const& p)
{
    std::vector<Check> checks;
    IntegratorSpec quad = build_integrator(ctx.config.integrator);
    quad.method = IntegrationMethod::Quadrature;
    auto fs_ = moving_spectrum(p);
    auto r = emission_rate(fs_, p.n0(), quad);
    if (r.forbidden) {
        checks.push_back({"sub_luminal_rate_zero", r.rate, 0.0, r.rate == 0.0, r.reason});
        return checks;
    }
    std::uint64_t seed = ctx.config.integrator.seed.value_or(1);
    auto n = static_cast<std::size_t>(ctx.config.integrator.samples);
    checks.push_back(agreement("oracle_rate", r.rate,
                               mc_oracle(fs_, p.n0(), seed, n, Observable::Rate, ctx.config.integrator.workers)));
    auto doubled = emission_rate(moving_spectrum(p.with_delta_n(2.0 * p.delta_n())), p.n0(), quad);
    checks.push_back(at_most("delta_n_quadratic", std::abs(doubled.rate / r.rate - 4.0), 4.0 * 10.0 * quad.tolerance));
    return checks;
}

std::vector<Check> accelerated_checks(PulseProfile const& p)
{
    auto u = unruh_rate_estimate(p, 0.0);
    double expected = u.acceleration / (2.0 * constants::pi);
    double rel = expected > 0.0 ? std::abs(u.temperature - expected) / expected : std::abs(u.temperature);
    return {at_most("unruh_temperature", rel, 1e-12)};
}

int run_validate(Context& ctx)
{
    Json report = ctx.header();
    PulseProfile p = checked_profile(ctx, report);
    std::vector<Check> checks;
    if (p.is<StaticAnisotropic>())
        checks = static_checks(ctx, p);
    else if (p.is<UniformlyMoving>())
        checks = moving_checks(ctx, p);
    else
        checks = accelerated_checks(p);
    Json list = Json::array();
    std::size_t passed = 0;
    for (auto const& c : checks) {
        list.push_back(to_json(c));
        passed += c.pass ? 1 : 0;
    }
    report["checks"] = list;
    report["summary"] = Json{{"total", checks.size()}, {"passed", passed}, {"failed", checks.size() - passed}};
    ctx.write_json("report.json", report);
    return passed == checks.size() ? exit_ok : exit_check_failed;
}

Json error_json(std::string const& code, std::string const& message, std::string const& hash)
{
    Json j;
    j["tool_version"] = std::string(tool_version);
    j["config_hash"] = hash.empty() ? Json(nullptr) : Json(hash);
    j["error"] = Json{{"code", code}, {"message", message}};
    return j;
}

}  // namespace

void write_error(fs::path const& out_dir, std::string const& code, std::string const& message,
                 std::string const& hash)
{
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    std::ofstream os(out_dir / "error.json");
    os << error_json(code, message, hash).dump(2) << '\n';
}

RunResult execute(RunConfig const& config, fs::path const& out_dir)
{
    Context ctx{config, out_dir, config_hash(config), {}};
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        ctx.result.exit_code = exit_module;
        return ctx.result;
    }
    try {
        switch (config.command) {
        case Command::Spectrum: ctx.result.exit_code = run_spectrum(ctx); break;
        case Command::Radiate: ctx.result.exit_code = run_radiate(ctx); break;
        case Command::Rate: ctx.result.exit_code = run_rate(ctx); break;
        case Command::Sweep: ctx.result.exit_code = run_sweep_command(ctx); break;
        case Command::Horizon: ctx.result.exit_code = run_horizon(ctx); break;
        case Command::Unruh: ctx.result.exit_code = run_unruh(ctx); break;
        case Command::Validate: ctx.result.exit_code = run_validate(ctx); break;
        }
    } catch (Error const& e) {
        write_error(out_dir, std::string(to_string(e.code())), e.what(), ctx.hash);
        ctx.result.files.push_back("error.json");
        ctx.result.exit_code = e.code() == ErrorCode::Config ? exit_config : exit_module;
        return ctx.result;
    }

    Json run = ctx.header();
    run["workers"] = config.integrator.workers;
    run["output_directory"] = out_dir.string();
    run["exit_code"] = ctx.result.exit_code;
    run["files"] = ctx.result.files;
    run["config"] = emit_config(config);
    std::ofstream os(out_dir / "run.json");
    os << run.dump(2) << '\n';
    ctx.result.files.push_back("run.json");
    return ctx.result;
}

}  // namespace qvrad::cli
