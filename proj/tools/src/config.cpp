#include "qvrad/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qvrad/constants.hpp"
#include "qvrad/error.hpp"

namespace qvrad::cli {

namespace {

constexpr std::array<std::pair<Command, char const*>, 7> command_names{{
    {Command::Spectrum, "spectrum"},
    {Command::Radiate, "radiate"},
    {Command::Rate, "rate"},
    {Command::Sweep, "sweep"},
    {Command::Horizon, "horizon"},
    {Command::Unruh, "unruh"},
    {Command::Validate, "validate"},
}};

[[noreturn]] void schema_error(std::string const& path, std::string const& what)
{
    throw Error(ErrorCode::Config, "schema error at '" + path + "': " + what);
}

std::string join(std::string const& path, std::string const& key)
{
    return path.empty() ? key : path + "." + key;
}

void check_keys(YAML::Node const& node, std::string const& path,
                std::initializer_list<char const*> allowed)
{
    if (!node.IsMap())
        schema_error(path.empty() ? "<root>" : path, "expected a mapping");
    for (auto const& kv : node) {
        auto key = kv.first.as<std::string>();
        bool ok = std::any_of(allowed.begin(), allowed.end(),
                              [&](char const* a) { return key == a; });
        if (!ok)
            schema_error(join(path, key), "unknown key '" + key + "'");
    }
}

double read_double(YAML::Node const& n, std::string const& path)
{
    if (!n.IsScalar())
        schema_error(path, "expected a number");
    try {
        double x = n.as<double>();
        if (!std::isfinite(x))
            schema_error(path, "expected a finite number");
        return x;
    } catch (YAML::BadConversion const&) {
        schema_error(path, "expected a number, got '" + n.Scalar() + "'");
    }
}

std::uint64_t read_u64(YAML::Node const& n, std::string const& path)
{
    if (!n.IsScalar())
        schema_error(path, "expected a non-negative integer");
    std::string const& s = n.Scalar();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        schema_error(path, "expected a non-negative integer, got '" + s + "'");
    return v;
}

std::string read_string(YAML::Node const& n, std::string const& path)
{
    if (!n.IsScalar())
        schema_error(path, "expected a string");
    return n.Scalar();
}

bool read_bool(YAML::Node const& n, std::string const& path)
{
    if (!n.IsScalar())
        schema_error(path, "expected true or false");
    try {
        return n.as<bool>();
    } catch (YAML::BadConversion const&) {
        schema_error(path, "expected true or false, got '" + n.Scalar() + "'");
    }
}

std::vector<double> read_doubles(YAML::Node const& n, std::string const& path)
{
    if (!n.IsSequence())
        schema_error(path, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i)
        out.push_back(read_double(n[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Vec3 read_vec3(YAML::Node const& n, std::string const& path)
{
    auto v = read_doubles(n, path);
    if (v.size() != 3)
        schema_error(path, "expected exactly three components");
    return {v[0], v[1], v[2]};
}

template<class T, class Fn>
void optional_field(YAML::Node const& parent, std::string const& path, char const* key, T& out, Fn read)
{
    if (auto n = parent[key])
        out = read(n, join(path, key));
}

void read_trajectory(YAML::Node const& n, std::string const& path, TrajectoryConfig& t)
{
    if (!n.IsMap())
        schema_error(path, "expected a mapping");
    if (auto k = n["kind"])
        t.kind = read_string(k, join(path, "kind"));
    if (t.kind == "uniform_velocity") {
        check_keys(n, path, {"kind", "velocity", "start"});
        optional_field(n, path, "velocity", t.velocity, read_vec3);
    } else if (t.kind == "uniform_acceleration") {
        check_keys(n, path, {"kind", "acceleration", "initial_velocity", "start"});
        optional_field(n, path, "acceleration", t.acceleration, read_vec3);
        optional_field(n, path, "initial_velocity", t.initial_velocity, read_vec3);
    } else if (t.kind == "tabulated") {
        check_keys(n, path, {"kind", "times", "positions"});
        optional_field(n, path, "times", t.times, read_doubles);
        if (auto p = n["positions"]) {
            if (!p.IsSequence())
                schema_error(join(path, "positions"), "expected a list of 3-vectors");
            for (std::size_t i = 0; i < p.size(); ++i)
                t.positions.push_back(read_vec3(p[i], join(path, "positions") + "[" + std::to_string(i) + "]"));
        }
        return;
    } else {
        schema_error(join(path, "kind"), "unknown trajectory kind '" + t.kind + "'");
    }
    optional_field(n, path, "start", t.start, read_vec3);
}

void read_profile(YAML::Node const& n, ProfileConfig& p)
{
    std::string const path = "profile";
    if (!n.IsMap())
        schema_error(path, "expected a mapping");
    if (auto k = n["variant"])
        p.variant = read_string(k, "profile.variant");
    if (p.variant == "static") {
        check_keys(n, path, {"variant", "delta_n", "intensity", "n0", "kerr_n2", "envelope", "omega1",
                             "omega2", "omega3", "t0", "center"});
        optional_field(n, path, "omega1", p.omega1, read_double);
        optional_field(n, path, "omega2", p.omega2, read_double);
        optional_field(n, path, "omega3", p.omega3, read_double);
        optional_field(n, path, "t0", p.t0, read_double);
        optional_field(n, path, "center", p.center, read_vec3);
    } else if (p.variant == "moving") {
        check_keys(n, path, {"variant", "delta_n", "intensity", "n0", "kerr_n2", "envelope", "omega",
                             "velocity", "center"});
        optional_field(n, path, "omega", p.omega, read_double);
        optional_field(n, path, "velocity", p.velocity, read_vec3);
        optional_field(n, path, "center", p.center, read_vec3);
    } else if (p.variant == "accelerated") {
        check_keys(n, path, {"variant", "delta_n", "intensity", "n0", "kerr_n2", "envelope", "omega",
                             "acceleration", "trajectory"});
        optional_field(n, path, "omega", p.omega, read_double);
        if (n["acceleration"] && n["trajectory"])
            schema_error("profile.acceleration", "give either acceleration or a trajectory block, not both");
        if (auto a = n["acceleration"])
            p.trajectory.acceleration = read_vec3(a, "profile.acceleration");
        if (auto t = n["trajectory"])
            read_trajectory(t, "profile.trajectory", p.trajectory);
    } else {
        schema_error("profile.variant", "unknown profile variant '" + p.variant + "'");
    }
    if (auto x = n["delta_n"])
        p.delta_n = read_double(x, "profile.delta_n");
    if (auto x = n["intensity"])
        p.intensity = read_double(x, "profile.intensity");
    if (auto x = n["kerr_n2"])
        p.kerr_n2 = read_double(x, "profile.kerr_n2");
    optional_field(n, path, "n0", p.n0, read_double);
    optional_field(n, path, "envelope", p.envelope, read_string);
}

RunConfig from_yaml(YAML::Node const& root)
{
    check_keys(root, "", {"schema_version", "command", "profile", "integrator", "output", "spectrum",
                          "radiate", "rate", "sweep", "horizon", "unruh"});
    auto version = root["schema_version"];
    if (!version)
        schema_error("schema_version", "missing required key");
    if (read_u64(version, "schema_version") != static_cast<std::uint64_t>(schema_version))
        schema_error("schema_version", "unsupported version '" + version.Scalar() + "', expected 1");

    RunConfig c;
    auto command = root["command"];
    if (!command)
        schema_error("command", "missing required key");
    auto parsed = command_from_string(read_string(command, "command"));
    if (!parsed)
        schema_error("command", "unknown command '" + command.Scalar() + "'");
    c.command = *parsed;

    auto profile = root["profile"];
    if (!profile)
        schema_error("profile", "missing required block");
    read_profile(profile, c.profile);

    if (auto n = root["integrator"]) {
        std::string path = "integrator";
        check_keys(n, path, {"method", "tolerance", "max_evaluations", "samples", "seed", "workers"});
        auto& g = c.integrator;
        optional_field(n, path, "method", g.method, read_string);
        optional_field(n, path, "tolerance", g.tolerance, read_double);
        optional_field(n, path, "max_evaluations", g.max_evaluations, read_u64);
        optional_field(n, path, "samples", g.samples, read_u64);
        if (auto s = n["seed"])
            g.seed = read_u64(s, "integrator.seed");
        if (auto w = n["workers"]) {
            auto workers = read_u64(w, "integrator.workers");
            if (workers == 0 || workers > 1024)
                schema_error("integrator.workers", "must be between 1 and 1024");
            g.workers = static_cast<unsigned>(workers);
        }
    }
    if (auto n = root["output"]) {
        check_keys(n, "output", {"directory", "formats"});
        if (auto d = n["directory"])
            c.output.directory = read_string(d, "output.directory");
        if (auto f = n["formats"]) {
            if (!f.IsSequence())
                schema_error("output.formats", "expected a list");
            c.output.formats.clear();
            for (std::size_t i = 0; i < f.size(); ++i)
                c.output.formats.push_back(read_string(f[i], "output.formats[" + std::to_string(i) + "]"));
        }
    }
    if (auto n = root["spectrum"]) {
        check_keys(n, "spectrum", {"mode", "points", "half_extent"});
        optional_field(n, "spectrum", "mode", c.spectrum.mode, read_string);
        optional_field(n, "spectrum", "half_extent", c.spectrum.half_extent, read_double);
        if (auto p = n["points"]) {
            if (!p.IsSequence() || p.size() != 4)
                schema_error("spectrum.points", "expected four point counts (omega, kx, ky, kz)");
            for (std::size_t i = 0; i < 4; ++i)
                c.spectrum.points[i] = read_u64(p[i], "spectrum.points[" + std::to_string(i) + "]");
        }
    }
    if (auto n = root["radiate"]) {
        check_keys(n, "radiate", {"angular_bins", "correlation_bins", "angular_axis"});
        optional_field(n, "radiate", "angular_bins", c.radiate.angular_bins, read_u64);
        optional_field(n, "radiate", "correlation_bins", c.radiate.correlation_bins, read_u64);
        optional_field(n, "radiate", "angular_axis", c.radiate.angular_axis, read_vec3);
    }
    if (auto n = root["rate"]) {
        check_keys(n, "rate", {"angle_bins"});
        optional_field(n, "rate", "angle_bins", c.rate.angle_bins, read_u64);
    }
    if (auto n = root["sweep"]) {
        check_keys(n, "sweep", {"regime", "parameter", "observable", "values"});
        SweepConfig s;
        for (char const* key : {"regime", "parameter", "observable", "values"})
            if (!n[key])
                schema_error(join("sweep", key), "missing required key");
        s.regime = read_string(n["regime"], "sweep.regime");
        s.parameter = read_string(n["parameter"], "sweep.parameter");
        s.observable = read_string(n["observable"], "sweep.observable");
        s.values = read_doubles(n["values"], "sweep.values");
        c.sweep = s;
    }
    if (auto n = root["horizon"]) {
        check_keys(n, "horizon", {"geometry"});
        optional_field(n, "horizon", "geometry", c.horizon.geometry, read_string);
    }
    if (auto n = root["unruh"]) {
        check_keys(n, "unruh", {"acceleration_si", "medium_frame", "time"});
        if (auto a = n["acceleration_si"])
            c.unruh.acceleration_si = read_double(a, "unruh.acceleration_si");
        optional_field(n, "unruh", "medium_frame", c.unruh.medium_frame, read_bool);
        optional_field(n, "unruh", "time", c.unruh.time, read_double);
    }
    return c;
}

//---------------------------------------------------------------------------//
// Canonical emission
//---------------------------------------------------------------------------//

std::string fmt(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string fmt(Vec3 const& v)
{
    return "[" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + "]";
}

std::string quote(std::string const& s)
{
    std::string out = "\"";
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += ch;
        }
    }
    return out + "\"";
}

template<class Seq, class F>
std::string list(Seq const& seq, F f)
{
    std::string out = "[";
    bool first = true;
    for (auto const& x : seq) {
        if (!first)
            out += ", ";
        out += f(x);
        first = false;
    }
    return out + "]";
}

}  // namespace

std::string to_string(Command c)
{
    for (auto const& [k, n] : command_names)
        if (k == c)
            return n;
    return "unknown";
}

std::optional<Command> command_from_string(std::string const& s)
{
    for (auto const& [k, n] : command_names)
        if (s == n)
            return k;
    return std::nullopt;
}

PulseProfile build_profile(ProfileConfig const& p)
{
    double delta_n = 0.0;
    if (p.intensity) {
        double n2 = p.kerr_n2.value_or(constants::fused_silica_n2);
        delta_n = kerr_delta_n(n2, *p.intensity).delta_n;
    } else {
        delta_n = p.delta_n.value_or(0.0);
    }
    MaterialParams m{p.n0, p.kerr_n2};
    Envelope env = envelope_from_string(p.envelope);
    if (p.variant == "static")
        return PulseProfile(delta_n, m, env, StaticAnisotropic{p.omega1, p.omega2, p.omega3, p.t0, p.center});
    if (p.variant == "moving")
        return PulseProfile(delta_n, m, env, UniformlyMoving{p.omega, p.velocity, p.center});
    auto const& t = p.trajectory;
    Trajectory::Kind kind = UniformAcceleration{t.acceleration, t.initial_velocity, t.start};
    if (t.kind == "uniform_velocity")
        kind = UniformVelocity{t.velocity, t.start};
    else if (t.kind == "tabulated")
        kind = Tabulated{t.times, t.positions};
    return PulseProfile(delta_n, m, env, Accelerated{p.omega, Trajectory(kind)});
}

IntegratorSpec build_integrator(IntegratorConfig const& c)
{
    IntegratorSpec s;
    s.method = integration_method_from_string(c.method);
    s.tolerance = c.tolerance;
    s.max_evaluations = c.max_evaluations;
    s.samples = c.samples;
    s.seed = c.seed.value_or(1);
    s.workers = c.workers;
    return s;
}

SweepSpec build_sweep(RunConfig const& config)
{
    if (!config.sweep)
        throw Error(ErrorCode::Config, "schema error at 'sweep': required for the sweep command");
    SweepSpec s;
    s.base = build_profile(config.profile);
    s.regime = scaling_regime_from_string(config.sweep->regime);
    s.parameter = sweep_parameter_from_string(config.sweep->parameter);
    s.observable = sweep_observable_from_string(config.sweep->observable);
    s.values = config.sweep->values;
    s.integrator = build_integrator(config.integrator);
    return s;
}

void validate_config(RunConfig const& c)
{
    auto const& g = c.integrator;
    if (g.method != "quadrature" && g.method != "monte_carlo")
        schema_error("integrator.method", "expected quadrature or monte_carlo, got '" + g.method + "'");
    if (!(g.tolerance > 0.0))
        schema_error("integrator.tolerance", "must be positive");
    if (g.samples == 0)
        schema_error("integrator.samples", "must be positive");
    if (g.max_evaluations == 0)
        schema_error("integrator.max_evaluations", "must be positive");
    if (g.method == "monte_carlo" && !g.seed)
        schema_error("integrator.seed", "required when integrator.method is monte_carlo");
    if (g.workers == 0)
        schema_error("integrator.workers", "must be at least 1");
    for (std::size_t i = 0; i < c.output.formats.size(); ++i) {
        auto const& f = c.output.formats[i];
        if (f != "json" && f != "csv" && f != "bin")
            schema_error("output.formats[" + std::to_string(i) + "]", "expected json, csv or bin");
    }
    if (c.spectrum.mode != "analytic" && c.spectrum.mode != "numeric")
        schema_error("spectrum.mode", "expected analytic or numeric");
    for (std::size_t i = 0; i < 4; ++i)
        if (c.spectrum.points[i] < 5 || c.spectrum.points[i] % 2 == 0)
            schema_error("spectrum.points[" + std::to_string(i) + "]", "must be odd and at least 5");
    if (!(c.spectrum.half_extent > 0.0))
        schema_error("spectrum.half_extent", "must be positive");
    if (c.rate.angle_bins == 0)
        schema_error("rate.angle_bins", "must be positive");
    if (c.horizon.geometry != "3d" && c.horizon.geometry != "1d")
        schema_error("horizon.geometry", "expected 3d or 1d");
    auto const& p = c.profile;
    if (p.delta_n && p.intensity)
        schema_error("profile.intensity", "give either delta_n or intensity, not both");
    if (!p.delta_n && !p.intensity)
        schema_error("profile.delta_n", "missing required key (or give intensity)");
    try {
        envelope_from_string(p.envelope);
    } catch (Error const& e) {
        schema_error("profile.envelope", e.what());
    }
    if (c.command == Command::Sweep) {
        if (!c.sweep)
            schema_error("sweep", "required for the sweep command");
        try {
            scaling_regime_from_string(c.sweep->regime);
        } catch (Error const& e) {
            schema_error("sweep.regime", e.what());
        }
        try {
            sweep_parameter_from_string(c.sweep->parameter);
        } catch (Error const& e) {
            schema_error("sweep.parameter", e.what());
        }
        try {
            sweep_observable_from_string(c.sweep->observable);
        } catch (Error const& e) {
            schema_error("sweep.observable", e.what());
        }
    }
    PulseProfile profile = [&] {
        try {
            return build_profile(p);
        } catch (Error const& e) {
            schema_error("profile", e.what());
        }
    }();
    auto warnings = validate_profile(profile);
    for (auto const& w : warnings)
        if (w.severity == Warning::Severity::Error)
            schema_error("profile", w.message);
}

RunConfig read_config(std::string const& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (YAML::ParserException const& e) {
        throw Error(ErrorCode::Config, "syntax error at line " + std::to_string(e.mark.line + 1) +
                                           ", column " + std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    if (!root || root.IsNull())
        schema_error("<root>", "empty configuration");
    return from_yaml(root);
}

RunConfig parse_config(std::string const& text)
{
    RunConfig c = read_config(text);
    validate_config(c);
    return c;
}

std::string emit_config(RunConfig const& c)
{
    std::ostringstream os;
    os << "schema_version: " << schema_version << "\n";
    os << "command: " << to_string(c.command) << "\n";

    auto const& p = c.profile;
    os << "profile:\n";
    os << "  variant: " << p.variant << "\n";
    if (p.delta_n)
        os << "  delta_n: " << fmt(*p.delta_n) << "\n";
    if (p.intensity)
        os << "  intensity: " << fmt(*p.intensity) << "\n";
    os << "  n0: " << fmt(p.n0) << "\n";
    if (p.kerr_n2)
        os << "  kerr_n2: " << fmt(*p.kerr_n2) << "\n";
    os << "  envelope: " << p.envelope << "\n";
    if (p.variant == "static") {
        os << "  omega1: " << fmt(p.omega1) << "\n";
        os << "  omega2: " << fmt(p.omega2) << "\n";
        os << "  omega3: " << fmt(p.omega3) << "\n";
        os << "  t0: " << fmt(p.t0) << "\n";
        os << "  center: " << fmt(p.center) << "\n";
    } else if (p.variant == "moving") {
        os << "  omega: " << fmt(p.omega) << "\n";
        os << "  velocity: " << fmt(p.velocity) << "\n";
        os << "  center: " << fmt(p.center) << "\n";
    } else {
        auto const& t = p.trajectory;
        os << "  omega: " << fmt(p.omega) << "\n";
        os << "  trajectory:\n";
        os << "    kind: " << t.kind << "\n";
        if (t.kind == "uniform_velocity") {
            os << "    velocity: " << fmt(t.velocity) << "\n";
            os << "    start: " << fmt(t.start) << "\n";
        } else if (t.kind == "uniform_acceleration") {
            os << "    acceleration: " << fmt(t.acceleration) << "\n";
            os << "    initial_velocity: " << fmt(t.initial_velocity) << "\n";
            os << "    start: " << fmt(t.start) << "\n";
        } else {
            os << "    times: " << list(t.times, [](double x) { return fmt(x); }) << "\n";
            os << "    positions: " << list(t.positions, [](Vec3 const& x) { return fmt(x); }) << "\n";
        }
    }

    auto const& g = c.integrator;
    os << "integrator:\n";
    os << "  method: " << g.method << "\n";
    os << "  tolerance: " << fmt(g.tolerance) << "\n";
    os << "  max_evaluations: " << g.max_evaluations << "\n";
    os << "  samples: " << g.samples << "\n";
    if (g.seed)
        os << "  seed: " << *g.seed << "\n";
    os << "  workers: " << g.workers << "\n";

    os << "output:\n";
    if (c.output.directory)
        os << "  directory: " << quote(*c.output.directory) << "\n";
    os << "  formats: " << list(c.output.formats, [](std::string const& s) { return s; }) << "\n";

    os << "spectrum:\n";
    os << "  mode: " << c.spectrum.mode << "\n";
    os << "  points: " << list(c.spectrum.points, [](std::uint64_t n) { return std::to_string(n); }) << "\n";
    os << "  half_extent: " << fmt(c.spectrum.half_extent) << "\n";

    os << "radiate:\n";
    os << "  angular_bins: " << c.radiate.angular_bins << "\n";
    os << "  correlation_bins: " << c.radiate.correlation_bins << "\n";
    os << "  angular_axis: " << fmt(c.radiate.angular_axis) << "\n";

    os << "rate:\n";
    os << "  angle_bins: " << c.rate.angle_bins << "\n";

    if (c.sweep) {
        os << "sweep:\n";
        os << "  regime: " << c.sweep->regime << "\n";
        os << "  parameter: " << c.sweep->parameter << "\n";
        os << "  observable: " << c.sweep->observable << "\n";
        os << "  values: " << list(c.sweep->values, [](double x) { return fmt(x); }) << "\n";
    }

    os << "horizon:\n";
    os << "  geometry: " << c.horizon.geometry << "\n";

    os << "unruh:\n";
    if (c.unruh.acceleration_si)
        os << "  acceleration_si: " << fmt(*c.unruh.acceleration_si) << "\n";
    os << "  medium_frame: " << (c.unruh.medium_frame ? "true" : "false") << "\n";
    os << "  time: " << fmt(c.unruh.time) << "\n";
    return os.str();
}

std::string config_hash(RunConfig const& config)
{
    RunConfig c = config;
    c.integrator.workers = 1;
    c.output.directory.reset();
    std::string text = emit_config(c);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qvrad::cli
