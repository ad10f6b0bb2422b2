#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qvrad/profiles.hpp"
#include "qvrad/vec3.hpp"

namespace qvrad {

using Complex = std::complex<double>;

//! Fourier convention shared by every spectrum in the library:
//!   dn~(omega, k) = \int dt d^3r exp(+i omega t - i k.r) dn(t, r),
//! with no 2 pi in the forward transform. All 2 pi factors live in the
//! momentum-space measures.
inline constexpr std::string_view fourier_convention = "exp(+i*omega*t - i*k.r); forward unnormalized";

//! Length scales of the source profile, kept alongside every spectrum so
//! integrators can size domains and proposals without the profile.
struct SourceScales
{
    double omega1 = 1.0;
    double omega2 = 1.0;
    double omega3 = 1.0;
    double light_speed = 1.0;
    Envelope envelope = Envelope::Gaussian;
};

//! Closed-form transform of the anisotropic Gaussian
//!   dn = amp exp(-Omega1^2 (t-t0)^2 - Omega2^2 x^2/c^2 - Omega3^2 (y^2+z^2)/c^2):
//!   dn~ = amp pi^2 c^3 / (Omega1 Omega2 Omega3^2)
//!         exp(-omega^2/4 Omega1^2 - c^2 kx^2/4 Omega2^2 - c^2 k_perp^2/4 Omega3^2)
//!         exp(i omega t0 - i k.r0)
struct GaussianTransform
{
    double delta_n = 0.0;
    SourceScales scales;
    double t0 = 0.0;
    Vec3 center{};

    double peak() const;
    double magnitude(double omega, Vec3 const& k) const;
    Complex operator()(double omega, Vec3 const& k) const;
};

//! Sampling request for numeric_spectrum. Each axis spans +-half_extent in
//! the scaled coordinate (Omega1 t, Omega2 x / c, ...) with an odd number of
//! points so the frequency lattice is symmetric about zero.
struct GridSpec
{
    std::array<std::size_t, 4> points{45, 45, 45, 45};
    double half_extent = 6.0;
    //! When false, extent/resolution checks are skipped. Only meant for
    //! deliberately truncated diagnostic grids.
    bool enforce_coverage = true;
};

inline constexpr double minimum_half_extent = 6.0;

struct GridAxis
{
    std::size_t count = 0;
    double spacing = 0.0;      // frequency / wavenumber spacing
    double sample_step = 0.0;  // real-space sampling step
    std::ptrdiff_t half() const { return static_cast<std::ptrdiff_t>(count / 2); }
    double max_value() const { return spacing * static_cast<double>(half()); }
};

//! Sampled transform on a symmetric (omega, kx, ky, kz) lattice.
//! Storage is omega-major with every axis ascending from -half to +half.
class SpectralGrid
{
  public:
    SpectralGrid(std::array<GridAxis, 4> axes, std::vector<Complex> values, double half_extent);

    std::array<GridAxis, 4> const& axes() const { return axes_; }
    std::vector<Complex> const& values() const { return values_; }
    double half_extent() const { return half_extent_; }

    //! Value at signed lattice indices (each in [-half, half]).
    Complex at(std::array<std::ptrdiff_t, 4> const& idx) const;
    double coordinate(std::size_t axis, std::ptrdiff_t idx) const;
    std::size_t flat_index(std::array<std::ptrdiff_t, 4> const& idx) const;

    //! Tensor cubic (4-point Lagrange) interpolation; nullopt outside the
    //! lattice.
    std::optional<Complex> interpolate(double omega, Vec3 const& k) const;
    double peak() const;

  private:
    std::array<GridAxis, 4> axes_;
    std::vector<Complex> values_;
    double half_extent_;
};

class SpectralAmplitude
{
  public:
    enum class Kind { ClosedForm, Grid };
    using Storage = std::variant<GaussianTransform, SpectralGrid>;

    SpectralAmplitude(Storage storage, SourceScales scales, double delta_n);

    Kind kind() const;
    std::string_view convention_tag() const { return fourier_convention; }
    SourceScales const& scales() const { return scales_; }
    double light_speed() const { return scales_.light_speed; }
    double delta_n() const { return delta_n_; }

    Storage const& storage() const { return storage_; }
    GaussianTransform const* closed_form() const { return std::get_if<GaussianTransform>(&storage_); }
    SpectralGrid const* grid() const { return std::get_if<SpectralGrid>(&storage_); }

    //! Throws ErrorCode::Extent for grid points outside the lattice.
    Complex value(double omega, Vec3 const& k) const;
    std::optional<Complex> try_value(double omega, Vec3 const& k) const;

  private:
    Storage storage_;
    SourceScales scales_;
    double delta_n_;
};

//! Uniformly moving pulse: dn~(omega, k) = g~(k) 2 pi delta(omega - v.k).
//! Only the spatial transform is stored; the temporal delta is kept exact.
struct FactorizedMovingSpectrum
{
    double delta_n = 0.0;
    double omega = 1.0;
    double light_speed = 1.0;
    Vec3 velocity{};
    Vec3 center{};

    //! g~(k) = amp (sqrt(pi) c / Omega)^3 exp(-c^2 |k|^2 / 4 Omega^2) exp(-i k.r0)
    Complex spatial(Vec3 const& k) const;
    double spatial_magnitude(double k_norm) const;
    double spatial_peak() const;
    //! |k| beyond which |g~| < 1e-12 of its peak.
    double spatial_extent() const;
    //! Frequency carried by wavenumber k on the constraint surface.
    double constraint_frequency(Vec3 const& k) const { return dot(velocity, k); }
};

//! Closed-form transform; throws ErrorCode::NotClosedForm for envelopes or
//! variants without one.
SpectralAmplitude analytic_spectrum(PulseProfile const& p);

//! 4D FFT of the sampled profile (StaticAnisotropic only).
SpectralAmplitude numeric_spectrum(PulseProfile const& p, GridSpec const& spec = {});

FactorizedMovingSpectrum moving_spectrum(PulseProfile const& p);

struct ParsevalResult
{
    double real_space = 0.0;  // \int |dn|^2 dt d^3r
    double spectral = 0.0;    // (2 pi)^-4 \int |dn~|^2 d omega d^3k
    double discrepancy = 0.0;
    bool flagged = false;
};

inline constexpr double parseval_tolerance = 1e-6;

ParsevalResult parseval_check(PulseProfile const& p, SpectralAmplitude const& s);

//! max |dn~(-w,-k) - conj dn~(w,k)| / peak over the lattice.
double hermitian_error(SpectralGrid const& g);

//! max |grid - exact| / |exact| over lattice points with
//! |exact| >= floor * peak.
double max_relative_error(SpectralGrid const& g, GaussianTransform const& exact,
                          double floor = 1e-6);

//! Flat little-endian layout:
//!   char[8] magic "QVRSPEC1"
//!   uint64 metadata length, then that many bytes of free-form text
//!   int64 counts[4]        (omega, kx, ky, kz)
//!   float64 spacings[4]
//!   float64 origins[4]     (first lattice coordinate on each axis)
//!   float64 half_extent
//!   payload: (re, im) float64 pairs, omega-major, each axis ascending.
void write_grid_binary(std::ostream& os, SpectralGrid const& g, std::string const& metadata = {});
SpectralGrid read_grid_binary(std::istream& is, std::string* metadata = nullptr);
//! Columns: omega,kx,ky,kz,re,im
void write_grid_csv(std::ostream& os, SpectralGrid const& g);

}  // namespace qvrad
