#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qvrad/profiles.hpp"
#include "qvrad/vec3.hpp"

namespace qvrad {

//---------------------------------------------------------------------------//
// Medium Lorentz boosts
//---------------------------------------------------------------------------//

using Matrix4 = std::array<std::array<double, 4>, 4>;

//! Boost with invariant speed c acting on (t, x, y, z): maps old
//! coordinates to the frame moving with velocity u.
Matrix4 lorentz_boost(Vec3 const& u, double light_speed);

//! A moving pulse seen from a boosted frame. `to_base` maps event
//! coordinates of this frame to those of the base profile's frame.
class BoostedProfile
{
  public:
    BoostedProfile(PulseProfile base, Matrix4 to_base, Matrix4 from_base);

    PulseProfile const& base() const { return base_; }
    Matrix4 const& to_base() const { return to_base_; }
    Matrix4 const& from_base() const { return from_base_; }
    double delta_n() const { return base_.delta_n(); }

    double evaluate(double t, Vec3 const& r) const;
    //! Velocity of the pulse center in this frame.
    Vec3 pulse_velocity() const;

  private:
    PulseProfile base_;
    Matrix4 to_base_;
    Matrix4 from_base_;
};

//! Throws ErrorCode::NoValidBoost for |u| >= c and ErrorCode::WrongVariant
//! unless the profile is UniformlyMoving.
BoostedProfile boost_profile(PulseProfile const& p, Vec3 const& u);
BoostedProfile boost_profile(BoostedProfile const& p, Vec3 const& u);

//---------------------------------------------------------------------------//
// Luminal regimes
//---------------------------------------------------------------------------//

enum class LuminalRegime { SubLuminal, TransLuminal, SuperLuminal };

std::string to_string(LuminalRegime r);

struct RegimeClassification
{
    LuminalRegime regime = LuminalRegime::SubLuminal;
    double c_outside = 1.0;  // 1 / n0
    double c_inside = 1.0;   // 1 / (n0 + delta_n)
    double v = 0.0;
};

//! Relative tolerance: speeds within this fraction of c_outside of a
//! boundary count as trans-luminal.
inline constexpr double regime_tolerance = 1e-12;

RegimeClassification classify_regime(double n0, double delta_n, double v);

//---------------------------------------------------------------------------//
// Horizons
//---------------------------------------------------------------------------//

//! Local light speed c(x) along the comoving axis, with derivative.
struct SpeedProfile
{
    std::function<double(double)> speed;
    std::function<double(double)> derivative;
    double width = 1.0;  // characteristic length for the search window
};

//! c(x) = 1 / (n0 + dn(x)), x along the pulse velocity measured from its
//! center (positive = front).
SpeedProfile comoving_speed_profile(PulseProfile const& p);

enum class HorizonType { BlackHole, WhiteHole };

std::string to_string(HorizonType t);

struct Horizon
{
    double position = 0.0;
    HorizonType type = HorizonType::BlackHole;
    double surface_gravity = 0.0;
    double temperature = 0.0;
};

inline constexpr std::size_t horizon_search_points = 4096;
inline constexpr double horizon_search_widths = 6.0;
inline constexpr double horizon_root_tolerance = 1e-12;  // relative to v
inline constexpr double degenerate_surface_gravity = 1e-14;

//! Roots of c(x) = v on [-6, 6] widths, sorted by position. A root where
//! c - v rises toward +x is a black-hole horizon, otherwise a white hole.
//! Throws ErrorCode::NoHorizon without a sign change and
//! ErrorCode::DegenerateHorizon for a tangential root.
std::vector<Horizon> find_horizons(SpeedProfile const& c, double v);
std::vector<Horizon> find_horizons(PulseProfile const& p, double v);

struct SurfaceGravity
{
    double kappa = 0.0;
    double temperature = 0.0;  // kappa / 2 pi
};

//! kappa = |d/dx (v - c(x))| at x*.
SurfaceGravity surface_gravity(SpeedProfile const& c, double x);
SurfaceGravity surface_gravity(PulseProfile const& p, double v, double x);

enum class HawkingGeometry { ThreeD, OneD };

struct HorizonReport
{
    RegimeClassification regime;
    std::vector<Horizon> horizons;
    HawkingGeometry geometry = HawkingGeometry::ThreeD;
    std::optional<double> area;  // effective horizon area (c / Omega)^2
    double omega = 0.0;
    double delta_n = 0.0;
    std::string frame = "comoving";

    //! Largest horizon temperature, or 0 without horizons.
    double temperature() const;
};

HorizonReport horizon_report(PulseProfile const& p, HawkingGeometry geometry = HawkingGeometry::ThreeD);

struct HawkingEstimate
{
    double rate = 0.0;
    bool order_of_magnitude = true;
    bool non_perturbative = false;
    std::string note;
};

//! 3D: A T^3. 1D: Omega dn, flagged non-perturbative. Prefactors are 1.
HawkingEstimate hawking_rate_estimate(HorizonReport const& report);

//---------------------------------------------------------------------------//
// Unruh effect
//---------------------------------------------------------------------------//

//! T = a / 2 pi in natural units.
double unruh_temperature(double a);

struct UnruhKelvin
{
    double kelvin = 0.0;
    double hbar = 0.0;
    double boltzmann = 0.0;
    double light_speed = 0.0;  // m/s actually used
};

//! T = hbar a / (2 pi k_B c) for a in m/s^2. With `medium_frame` the vacuum
//! light speed is replaced by c0 / n0.
UnruhKelvin unruh_temperature_kelvin(double a_si, bool medium_frame = false, double n0 = 1.0);

struct UnruhReport
{
    double acceleration = 0.0;
    double temperature = 0.0;
    double cross_section = 0.0;  // dn^2 (c / Omega)^2
    double rate = 0.0;
    bool valid = true;
    bool approximate = false;  // instantaneous estimate from a tabulated path
    bool order_of_magnitude = true;
    std::vector<std::string> warnings;
};

//! Tabulated trajectories are evaluated at time t from the local second
//! difference of the samples.
UnruhReport unruh_rate_estimate(PulseProfile const& p, double t = 0.0);

}  // namespace qvrad
