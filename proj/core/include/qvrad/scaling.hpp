#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qvrad/profiles.hpp"
#include "qvrad/radiation.hpp"

namespace qvrad {

enum class ScalingRegime {
    OneParameter,
    PointLike,
    Cosmological,
    Needle,
    MovingSuperluminal,
    Hawking,
    Unruh,
};

enum class SweepParameter { Omega1, Omega2, Omega3, Omega, VMinusC, DeltaN, Acceleration };

enum class SweepObservable {
    Probability,
    MeanEnergy,
    TotalEnergy,
    MonopoleEnergy,
    Rate,
    ThetaMax,
    HawkingRate,
    UnruhRate,
};

std::string to_string(ScalingRegime r);
std::string to_string(SweepParameter p);
std::string to_string(SweepObservable o);
ScalingRegime scaling_regime_from_string(std::string const& s);
SweepParameter sweep_parameter_from_string(std::string const& s);
SweepObservable sweep_observable_from_string(std::string const& s);

//! Predicted exponent of `observable` in `parameter`. Throws
//! ErrorCode::Lookup for triples the table does not cover.
double expected_exponent(ScalingRegime regime, SweepObservable observable, SweepParameter parameter);

//! Allowed |fitted - expected| for a table entry.
double exponent_tolerance(ScalingRegime regime, SweepObservable observable, SweepParameter parameter);

//! Minimum ratio between the largest and smallest swept value.
inline constexpr double minimum_sweep_span = 8.0;
inline constexpr std::size_t minimum_sweep_points = 4;

struct SweepSpec
{
    PulseProfile base = PulseProfile::one_parameter(0.01, 1.0);
    ScalingRegime regime = ScalingRegime::OneParameter;
    SweepParameter parameter = SweepParameter::Omega;
    SweepObservable observable = SweepObservable::Probability;
    std::vector<double> values;
    IntegratorSpec integrator;
};

//! Profile at one sweep point, with the regime's tied parameters applied:
//! one-parameter pulses set all rates to Omega; point-like and cosmological
//! sweeps of Omega2 keep Omega3 = Omega2; Hawking sweeps of dn hold v, the
//! fractional crossing depth and the width c / Omega fixed by adjusting n0
//! and Omega.
PulseProfile sweep_profile(SweepSpec const& spec, double value);

//! Throws ErrorCode::Sweep naming the first offending point.
void validate_sweep(SweepSpec const& spec);

struct SweepRow
{
    double parameter = 0.0;
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

struct SweepTable
{
    ScalingRegime regime = ScalingRegime::OneParameter;
    SweepParameter parameter = SweepParameter::Omega;
    SweepObservable observable = SweepObservable::Probability;
    std::vector<SweepRow> rows;  // ordered by parameter
};

//! Single-point evaluation of the sweep observable.
SweepRow evaluate_point(SweepSpec const& spec, double value);

SweepTable run_sweep(SweepSpec const& spec);

struct ScalingFit
{
    double exponent = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    std::vector<double> residuals;  // log(value) - fit
};

ScalingFit fit_exponent(std::vector<double> const& x, std::vector<double> const& y);
ScalingFit fit_exponent(SweepTable const& table);

struct Verdict
{
    ScalingRegime regime = ScalingRegime::OneParameter;
    SweepParameter parameter = SweepParameter::Omega;
    SweepObservable observable = SweepObservable::Probability;
    double expected = 0.0;
    double fitted = 0.0;
    double std_error = 0.0;
    double r_squared = 0.0;
    double tolerance = 0.0;
    std::optional<double> flatness;  // max/min, reported for zero exponents
    bool pass = false;
};

inline constexpr double flatness_limit = 1.02;
inline constexpr double deterministic_r_squared = 0.999;

Verdict judge(SweepTable const& table, ScalingFit const& fit, IntegrationMethod method);

}  // namespace qvrad
