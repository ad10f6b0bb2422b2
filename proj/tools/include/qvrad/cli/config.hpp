#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qvrad/profiles.hpp"
#include "qvrad/radiation.hpp"
#include "qvrad/scaling.hpp"
#include "qvrad/spectrum.hpp"
#include "qvrad/vec3.hpp"

namespace qvrad::cli {

inline constexpr int schema_version = 1;

enum class Command { Spectrum, Radiate, Rate, Sweep, Horizon, Unruh, Validate };

std::string to_string(Command c);
std::optional<Command> command_from_string(std::string const& s);

struct TrajectoryConfig
{
    std::string kind = "uniform_acceleration";  // uniform_velocity | uniform_acceleration | tabulated
    Vec3 velocity{};
    Vec3 acceleration{};
    Vec3 initial_velocity{};
    Vec3 start{};
    std::vector<double> times;
    std::vector<Vec3> positions;

    bool operator==(TrajectoryConfig const&) const = default;
};

struct ProfileConfig
{
    std::string variant = "static";  // static | moving | accelerated
    std::optional<double> delta_n;
    std::optional<double> intensity;  // W cm^-2, converted with kerr_n2
    double n0 = 1.0;
    std::optional<double> kerr_n2;
    std::string envelope = "gaussian";
    // static
    double omega1 = 1.0;
    double omega2 = 1.0;
    double omega3 = 1.0;
    double t0 = 0.0;
    // moving / accelerated
    double omega = 1.0;
    Vec3 velocity{};
    Vec3 center{};
    TrajectoryConfig trajectory;

    bool operator==(ProfileConfig const&) const = default;
};

struct IntegratorConfig
{
    std::string method = "quadrature";
    double tolerance = 1e-9;
    std::uint64_t max_evaluations = 5'000'000;
    std::uint64_t samples = std::uint64_t{1} << 20;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;

    bool operator==(IntegratorConfig const&) const = default;
};

struct OutputConfig
{
    std::optional<std::string> directory;
    std::vector<std::string> formats{"json", "csv"};

    bool operator==(OutputConfig const&) const = default;
};

struct SpectrumConfig
{
    std::string mode = "analytic";  // analytic | numeric
    std::array<std::uint64_t, 4> points{45, 45, 45, 45};
    double half_extent = 6.0;

    bool operator==(SpectrumConfig const&) const = default;
};

struct RadiateConfig
{
    std::uint64_t angular_bins = 20;
    std::uint64_t correlation_bins = 50;
    Vec3 angular_axis{1.0, 0.0, 0.0};

    bool operator==(RadiateConfig const&) const = default;
};

struct RateConfig
{
    std::uint64_t angle_bins = 36;

    bool operator==(RateConfig const&) const = default;
};

struct SweepConfig
{
    std::string regime;
    std::string parameter;
    std::string observable;
    std::vector<double> values;

    bool operator==(SweepConfig const&) const = default;
};

struct HorizonConfig
{
    std::string geometry = "3d";  // 3d | 1d

    bool operator==(HorizonConfig const&) const = default;
};

struct UnruhConfig
{
    std::optional<double> acceleration_si;  // m/s^2, for the Kelvin conversion
    bool medium_frame = false;
    double time = 0.0;

    bool operator==(UnruhConfig const&) const = default;
};

struct RunConfig
{
    Command command = Command::Radiate;
    ProfileConfig profile;
    IntegratorConfig integrator;
    OutputConfig output;
    SpectrumConfig spectrum;
    RadiateConfig radiate;
    RateConfig rate;
    std::optional<SweepConfig> sweep;
    HorizonConfig horizon;
    UnruhConfig unruh;

    bool operator==(RunConfig const&) const = default;
};

//! Parses and validates a YAML run specification. Throws
//! ErrorCode::Config with "line L, column C" for syntax errors and the
//! dotted key path for schema violations.
RunConfig parse_config(std::string const& text);

//! Syntax and key checks only; callers apply overrides, then validate.
RunConfig read_config(std::string const& text);

//! Semantic checks shared by parse_config and command-line overrides.
void validate_config(RunConfig const& config);

//! Canonical YAML: every field spelled out in a fixed key order, numbers in
//! shortest round-trip form. parse_config(emit_config(c)) == c.
std::string emit_config(RunConfig const& config);

//! FNV-1a 64 of the canonical config with the worker count and output
//! directory removed, as 16 hex digits.
std::string config_hash(RunConfig const& config);

PulseProfile build_profile(ProfileConfig const& p);
IntegratorSpec build_integrator(IntegratorConfig const& c);
SweepSpec build_sweep(RunConfig const& config);

}  // namespace qvrad::cli
