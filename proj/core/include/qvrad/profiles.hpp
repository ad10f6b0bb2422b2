#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qvrad/vec3.hpp"

namespace qvrad {

//---------------------------------------------------------------------------//
// Material and envelope
//---------------------------------------------------------------------------//

//! Background dielectric. The permittivity n0^2 is derived, not stored.
struct MaterialParams
{
    double n0 = 1.0;
    std::optional<double> kerr_n2;  // W^-1 cm^2

    //! Medium light speed c = 1/n0 in units of the vacuum light speed.
    double light_speed() const { return 1.0 / n0; }
    void validate() const;
};

//! Radial envelope shapes f(rho), rho = |u| the norm of the scaled argument.
//! Every envelope is smooth, peaks at f(0) = 1 and decays at least as fast
//! as a Gaussian.
enum class Envelope {
    Gaussian,          // exp(-rho^2)
    GaussianPolynomial,  // (1 + rho^2) exp(-rho^2)
};

std::string to_string(Envelope e);
Envelope envelope_from_string(std::string const& name);

double envelope_value(Envelope e, double rho);
//! d f / d rho
double envelope_derivative(Envelope e, double rho);

//! Scaled wavenumber beyond which the 4D transform of the envelope stays
//! below 1e-12 of its peak. Used for the grid Nyquist check.
double envelope_spectral_cutoff(Envelope e);

//---------------------------------------------------------------------------//
// Trajectories
//---------------------------------------------------------------------------//

struct UniformVelocity
{
    Vec3 velocity{};
    Vec3 start{};
};

//! r(t) = start + v0 t + a t^2 / 2
struct UniformAcceleration
{
    Vec3 acceleration{};
    Vec3 initial_velocity{};
    Vec3 start{};
};

//! Piecewise-linear interpolation between samples; held constant outside.
struct Tabulated
{
    std::vector<double> times;
    std::vector<Vec3> positions;
};

class Trajectory
{
  public:
    using Kind = std::variant<UniformVelocity, UniformAcceleration, Tabulated>;

    explicit Trajectory(Kind kind);

    Kind const& kind() const { return kind_; }
    Vec3 position(double t) const;
    Vec3 velocity(double t) const;

  private:
    Kind kind_;
};

//---------------------------------------------------------------------------//
// Pulse profiles
//---------------------------------------------------------------------------//

//! delta_n = amp f(Omega1 (t - t0), Omega2 (x - x0)/c, Omega3 (y - y0)/c,
//!                 Omega3 (z - z0)/c)
struct StaticAnisotropic
{
    double omega1 = 1.0;
    double omega2 = 1.0;
    double omega3 = 1.0;
    double t0 = 0.0;
    Vec3 center{};
};

//! delta_n = amp f(Omega [r - center - v t] / c)
struct UniformlyMoving
{
    double omega = 1.0;
    Vec3 velocity{};
    Vec3 center{};
};

//! delta_n = amp f(Omega [r - r_P(t)] / c)
struct Accelerated
{
    double omega = 1.0;
    Trajectory trajectory{UniformAcceleration{}};
};

class PulseProfile
{
  public:
    using Shape = std::variant<StaticAnisotropic, UniformlyMoving, Accelerated>;

    //! Throws ErrorCode::InvalidProfile on structurally invalid input
    //! (negative or non-finite amplitude, non-positive rates, n0 < 1).
    //! Physical-validity limits on the amplitude are reported separately by
    //! validate_profile().
    PulseProfile(double delta_n, MaterialParams material, Envelope envelope, Shape shape);

    static PulseProfile one_parameter(double delta_n, double omega, double n0 = 1.0);
    static PulseProfile anisotropic(double delta_n, double omega1, double omega2,
                                    double omega3, double n0 = 1.0);
    static PulseProfile moving(double delta_n, double omega, Vec3 velocity, double n0 = 1.0);

    double delta_n() const { return delta_n_; }
    MaterialParams const& material() const { return material_; }
    double n0() const { return material_.n0; }
    double light_speed() const { return material_.light_speed(); }
    Envelope envelope() const { return envelope_; }
    Shape const& shape() const { return shape_; }

    template<class T>
    bool is() const { return std::holds_alternative<T>(shape_); }
    template<class T>
    T const& as() const { return std::get<T>(shape_); }

    PulseProfile with_delta_n(double delta_n) const;
    PulseProfile with_shape(Shape shape) const;

  private:
    double delta_n_;
    MaterialParams material_;
    Envelope envelope_;
    Shape shape_;
};

double evaluate_profile(PulseProfile const& p, double t, Vec3 const& r);

//---------------------------------------------------------------------------//
// Diagnostics
//---------------------------------------------------------------------------//

struct Warning
{
    enum class Severity { Warning, Error };
    Severity severity = Severity::Warning;
    std::string code;
    std::string message;
};

bool has_errors(std::vector<Warning> const& warnings);

//! Perturbativity and regime diagnostics. Amplitudes above 0.1 warn; at or
//! above 0.5 they are reported with Error severity.
std::vector<Warning> validate_profile(PulseProfile const& p);

inline constexpr double perturbative_warn_threshold = 0.1;
inline constexpr double perturbative_reject_threshold = 0.5;

//! Ratio separating scales for an asymptotic regime.
inline constexpr double asymptotic_ratio = 30.0;
//! Ratio below which two scales count as the same order.
inline constexpr double same_order_ratio = 3.0;
//! Accelerated pulses need Omega >= this factor times |a|.
inline constexpr double unruh_validity_factor = 10.0;

enum class StaticRegime { OneParameter, PointLike, Cosmological, Needle, Intermediate };

std::string to_string(StaticRegime r);
StaticRegime classify_static_regime(StaticAnisotropic const& s);

//---------------------------------------------------------------------------//
// Kerr conversion
//---------------------------------------------------------------------------//

struct KerrResult
{
    double delta_n = 0.0;
    std::vector<Warning> warnings;
};

//! delta_n = n2 I with n2 in W^-1 cm^2 and I in W cm^-2.
KerrResult kerr_delta_n(double n2, double intensity);

}  // namespace qvrad
