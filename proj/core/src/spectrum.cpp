#include "qvrad/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "qvrad/detail/quadrature.hpp"
#include "qvrad/detail/reduce.hpp"
#include "qvrad/error.hpp"

namespace qvrad {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt_pi = 1.7724538509055160273;
// Beyond this many lattice points a 4D grid stops fitting comfortably in memory.
constexpr std::size_t max_grid_points = std::size_t{80} * 1000 * 1000;

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

SourceScales scales_of(PulseProfile const& p)
{
    SourceScales s;
    s.light_speed = p.light_speed();
    s.envelope = p.envelope();
    if (auto const* st = std::get_if<StaticAnisotropic>(&p.shape())) {
        s.omega1 = st->omega1;
        s.omega2 = st->omega2;
        s.omega3 = st->omega3;
    } else if (auto const* mv = std::get_if<UniformlyMoving>(&p.shape())) {
        s.omega1 = s.omega2 = s.omega3 = mv->omega;
    } else {
        double w = std::get<Accelerated>(p.shape()).omega;
        s.omega1 = s.omega2 = s.omega3 = w;
    }
    return s;
}

//! \int_0^\infty rho^3 f(rho)^2 d rho for a radial envelope.
double radial_fourth_moment(Envelope e)
{
    auto f = [e](double rho) {
        double v = envelope_value(e, rho);
        return rho * rho * rho * v * v;
    };
    return detail::integrate_panels(f, {0.0, 1.0, 2.0, 4.0, 8.0}, 1e-14, 1000000, 1e-300)
        .value;
}

}  // namespace

//---------------------------------------------------------------------------//
// GaussianTransform
//---------------------------------------------------------------------------//

double GaussianTransform::peak() const
{
    double c = scales.light_speed;
    return delta_n * pi * pi * c * c * c /
           (scales.omega1 * scales.omega2 * scales.omega3 * scales.omega3);
}

double GaussianTransform::magnitude(double omega, Vec3 const& k) const
{
    double c = scales.light_speed;
    double a = omega / (2.0 * scales.omega1);
    double bx = c * k[0] / (2.0 * scales.omega2);
    double by = c * k[1] / (2.0 * scales.omega3);
    double bz = c * k[2] / (2.0 * scales.omega3);
    return peak() * std::exp(-(a * a + bx * bx + by * by + bz * bz));
}

Complex GaussianTransform::operator()(double omega, Vec3 const& k) const
{
    double phase = omega * t0 - dot(k, center);
    return std::polar(magnitude(omega, k), phase);
}

//---------------------------------------------------------------------------//
// SpectralGrid
//---------------------------------------------------------------------------//

SpectralGrid::SpectralGrid(std::array<GridAxis, 4> axes, std::vector<Complex> values,
                           double half_extent)
    : axes_(axes), values_(std::move(values)), half_extent_(half_extent)
{
    std::size_t total = 1;
    for (auto const& a : axes_) {
        if (a.count == 0 || a.count % 2 == 0)
            throw Error(ErrorCode::Domain, "grid axes need an odd, non-zero point count");
        total *= a.count;
    }
    if (total != values_.size())
        throw Error(ErrorCode::Domain, "grid payload size does not match axis counts");
}

std::size_t SpectralGrid::flat_index(std::array<std::ptrdiff_t, 4> const& idx) const
{
    std::size_t flat = 0;
    for (std::size_t a = 0; a < 4; ++a)
        flat = flat * axes_[a].count + static_cast<std::size_t>(idx[a] + axes_[a].half());
    return flat;
}

Complex SpectralGrid::at(std::array<std::ptrdiff_t, 4> const& idx) const
{
    for (std::size_t a = 0; a < 4; ++a) {
        if (std::abs(idx[a]) > axes_[a].half())
            throw Error(ErrorCode::Extent, "lattice index outside grid");
    }
    return values_[flat_index(idx)];
}

double SpectralGrid::coordinate(std::size_t axis, std::ptrdiff_t idx) const
{
    return axes_[axis].spacing * static_cast<double>(idx);
}

std::optional<Complex> SpectralGrid::interpolate(double omega, Vec3 const& k) const
{
    // Tensor 4-point Lagrange stencil, shifted inward at the lattice edges.
    std::array<double, 4> coord{omega, k[0], k[1], k[2]};
    std::array<std::ptrdiff_t, 4> first{};
    std::array<std::array<double, 4>, 4> weights{};
    for (std::size_t a = 0; a < 4; ++a) {
        double x = coord[a] / axes_[a].spacing;
        auto h = axes_[a].half();
        if (!(x >= -static_cast<double>(h) && x <= static_cast<double>(h)))
            return std::nullopt;
        auto lo = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
        lo = std::clamp<std::ptrdiff_t>(lo, -h, h - 3);
        first[a] = lo;
        for (int i = 0; i < 4; ++i) {
            double w = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i)
                    w *= (x - static_cast<double>(lo + j)) / static_cast<double>(i - j);
            weights[a][i] = w;
        }
    }
    Complex acc{0.0, 0.0};
    std::array<std::ptrdiff_t, 4> idx{};
    for (int i0 = 0; i0 < 4; ++i0) {
        idx[0] = first[0] + i0;
        for (int i1 = 0; i1 < 4; ++i1) {
            idx[1] = first[1] + i1;
            double w01 = weights[0][i0] * weights[1][i1];
            for (int i2 = 0; i2 < 4; ++i2) {
                idx[2] = first[2] + i2;
                double w012 = w01 * weights[2][i2];
                idx[3] = first[3];
                std::size_t base = flat_index(idx);
                for (int i3 = 0; i3 < 4; ++i3)
                    acc += w012 * weights[3][i3] * values_[base + static_cast<std::size_t>(i3)];
            }
        }
    }
    return acc;
}

double SpectralGrid::peak() const
{
    double best = 0.0;
    for (auto const& v : values_)
        best = std::max(best, std::abs(v));
    return best;
}

//---------------------------------------------------------------------------//
// SpectralAmplitude
//---------------------------------------------------------------------------//

SpectralAmplitude::SpectralAmplitude(Storage storage, SourceScales scales, double delta_n)
    : storage_(std::move(storage)), scales_(scales), delta_n_(delta_n)
{
}

SpectralAmplitude::Kind SpectralAmplitude::kind() const
{
    return std::holds_alternative<GaussianTransform>(storage_) ? Kind::ClosedForm : Kind::Grid;
}

std::optional<Complex> SpectralAmplitude::try_value(double omega, Vec3 const& k) const
{
    if (auto const* g = closed_form())
        return (*g)(omega, k);
    return grid()->interpolate(omega, k);
}

Complex SpectralAmplitude::value(double omega, Vec3 const& k) const
{
    auto v = try_value(omega, k);
    if (!v)
        throw Error(ErrorCode::Extent, "spectral point outside the sampled grid extent");
    return *v;
}

//---------------------------------------------------------------------------//
// FactorizedMovingSpectrum
//---------------------------------------------------------------------------//

double FactorizedMovingSpectrum::spatial_peak() const
{
    double a = sqrt_pi * light_speed / omega;
    return delta_n * a * a * a;
}

double FactorizedMovingSpectrum::spatial_magnitude(double k_norm) const
{
    double b = light_speed * k_norm / (2.0 * omega);
    return spatial_peak() * std::exp(-b * b);
}

Complex FactorizedMovingSpectrum::spatial(Vec3 const& k) const
{
    return std::polar(spatial_magnitude(norm(k)), -dot(k, center));
}

double FactorizedMovingSpectrum::spatial_extent() const
{
    // exp(-c^2 k^2 / 4 Omega^2) = 1e-12
    return 2.0 * omega / light_speed * std::sqrt(12.0 * std::log(10.0));
}

//---------------------------------------------------------------------------//
// Constructors
//---------------------------------------------------------------------------//

SpectralAmplitude analytic_spectrum(PulseProfile const& p)
{
    if (p.envelope() != Envelope::Gaussian)
        throw Error(ErrorCode::NotClosedForm,
                    "no closed-form transform for envelope '" + to_string(p.envelope()) + "'");
    auto const* st = std::get_if<StaticAnisotropic>(&p.shape());
    if (!st)
        throw Error(ErrorCode::NotClosedForm,
                    "closed-form 4D transform exists only for static anisotropic pulses");
    GaussianTransform g{p.delta_n(), scales_of(p), st->t0, st->center};
    return SpectralAmplitude(g, g.scales, p.delta_n());
}

FactorizedMovingSpectrum moving_spectrum(PulseProfile const& p)
{
    auto const* mv = std::get_if<UniformlyMoving>(&p.shape());
    if (!mv)
        throw Error(ErrorCode::WrongVariant, "moving_spectrum needs a uniformly moving pulse");
    if (p.envelope() != Envelope::Gaussian)
        throw Error(ErrorCode::NotClosedForm,
                    "moving spectra are implemented for the Gaussian envelope only");
    return {p.delta_n(), mv->omega, p.light_speed(), mv->velocity, mv->center};
}

namespace {

// Reorder one axis of a row-major 4D array: out[pos] = in[source[pos]].
void permute_axis(std::vector<Complex>& data, std::array<std::size_t, 4> const& dims,
                  std::size_t axis, std::vector<std::size_t> const& source)
{
    std::size_t stride = 1;
    for (std::size_t a = axis + 1; a < 4; ++a)
        stride *= dims[a];
    std::size_t n = dims[axis];
    std::size_t outer = data.size() / (n * stride);
    std::vector<Complex> line(n);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t s = 0; s < stride; ++s) {
            Complex* base = data.data() + o * n * stride + s;
            for (std::size_t i = 0; i < n; ++i)
                line[i] = base[source[i] * stride];
            for (std::size_t i = 0; i < n; ++i)
                base[i * stride] = line[i];
        }
    }
}

}  // namespace

SpectralAmplitude numeric_spectrum(PulseProfile const& p, GridSpec const& spec)
{
    auto const* st = std::get_if<StaticAnisotropic>(&p.shape());
    if (!st)
        throw Error(ErrorCode::WrongVariant,
                    "numeric_spectrum samples static anisotropic pulses only");
    SourceScales scales = scales_of(p);
    double c = scales.light_speed;
    double L = spec.half_extent;
    if (!(L > 0.0))
        throw Error(ErrorCode::Resolution, "grid half extent must be positive");

    std::size_t total = 1;
    for (std::size_t n : spec.points) {
        if (n < 5 || n % 2 == 0)
            throw Error(ErrorCode::Resolution, "grid axes need an odd point count >= 5");
        total *= n;
    }
    if (total > max_grid_points)
        throw Error(ErrorCode::Resolution,
                    "grid of " + std::to_string(total) + " points exceeds the memory limit");

    if (spec.enforce_coverage) {
        if (L < minimum_half_extent)
            throw Error(ErrorCode::Resolution,
                        "grid half extent " + std::to_string(L) +
                            " does not cover the profile support (need >= 6 scaled widths)");
        double cutoff = envelope_spectral_cutoff(p.envelope());
        for (std::size_t a = 0; a < 4; ++a) {
            double m = static_cast<double>(spec.points[a] / 2);
            double h = L / m;
            double k_max = 2.0 * pi * m / (static_cast<double>(spec.points[a]) * h);
            if (k_max < cutoff) {
                throw Error(ErrorCode::Resolution,
                            "axis " + std::to_string(a) + " resolves scaled wavenumbers up to " +
                                std::to_string(k_max) + " but the envelope needs " +
                                std::to_string(cutoff));
            }
        }
    }

    std::array<double, 4> rates{scales.omega1, scales.omega2 / c, scales.omega3 / c,
                                scales.omega3 / c};
    std::array<double, 4> centers{st->t0, st->center[0], st->center[1], st->center[2]};
    std::array<GridAxis, 4> axes{};
    std::array<std::size_t, 4> dims{};
    for (std::size_t a = 0; a < 4; ++a) {
        std::size_t n = spec.points[a];
        double m = static_cast<double>(n / 2);
        axes[a].count = n;
        axes[a].sample_step = L / m / rates[a];
        axes[a].spacing = 2.0 * pi / (static_cast<double>(n) * axes[a].sample_step);
        dims[a] = n;
    }

    // Sample the profile.
    std::vector<Complex> data(total);
    auto sample_coord = [&](std::size_t a, std::size_t i) {
        return centers[a] +
               (static_cast<double>(i) - static_cast<double>(dims[a] / 2)) * axes[a].sample_step;
    };
    for (std::size_t i = 0; i < dims[0]; ++i) {
        double t = sample_coord(0, i);
        for (std::size_t j = 0; j < dims[1]; ++j) {
            double x = sample_coord(1, j);
            for (std::size_t k = 0; k < dims[2]; ++k) {
                double y = sample_coord(2, k);
                std::size_t row = ((i * dims[1] + j) * dims[2] + k) * dims[3];
                for (std::size_t l = 0; l < dims[3]; ++l) {
                    double z = sample_coord(3, l);
                    data[row + l] = evaluate_profile(p, t, Vec3{x, y, z});
                }
            }
        }
    }

    // Unnormalized forward transform, exp(-2 pi i n j / N) on every axis.
    {
        std::array<int, 4> n_int{static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                                 static_cast<int>(dims[2]), static_cast<int>(dims[3])};
        auto* buf = reinterpret_cast<fftw_complex*>(data.data());
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            plan = fftw_plan_dft(4, n_int.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        }
        if (!plan)
            throw Error(ErrorCode::Resolution, "FFTW could not plan the transform");
        fftw_execute(plan);
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    // Reorder to ascending signed frequency. The time axis uses the opposite
    // sign convention, so lattice index q there reads FFT slot -q.
    for (std::size_t a = 0; a < 4; ++a) {
        std::size_t n = dims[a];
        auto m = static_cast<std::ptrdiff_t>(n / 2);
        std::vector<std::size_t> source(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::ptrdiff_t q = static_cast<std::ptrdiff_t>(pos) - m;
            std::ptrdiff_t slot = (a == 0) ? -q : q;
            auto nn = static_cast<std::ptrdiff_t>(n);
            source[pos] = static_cast<std::size_t>(((slot % nn) + nn) % nn);
        }
        permute_axis(data, dims, a, source);
    }

    // Per-axis phase and step factors:
    //   time:  h exp(+i w t_c) exp(-2 pi i q m / N)
    //   space: h exp(-i k x_c) exp(+2 pi i q m / N)
    std::array<std::vector<Complex>, 4> factor;
    for (std::size_t a = 0; a < 4; ++a) {
        std::size_t n = dims[a];
        auto m = static_cast<std::ptrdiff_t>(n / 2);
        factor[a].resize(n);
        double sign = (a == 0) ? 1.0 : -1.0;
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::ptrdiff_t q = static_cast<std::ptrdiff_t>(pos) - m;
            double freq = axes[a].spacing * static_cast<double>(q);
            // Reduce q*m mod N before forming the angle to keep it small.
            auto nn = static_cast<std::ptrdiff_t>(n);
            std::ptrdiff_t qm = ((q * m) % nn + nn) % nn;
            double lattice_phase = -sign * 2.0 * pi * static_cast<double>(qm) / static_cast<double>(n);
            double phase = sign * freq * centers[a] + lattice_phase;
            factor[a][pos] = std::polar(axes[a].sample_step, phase);
        }
    }
    for (std::size_t i = 0; i < dims[0]; ++i) {
        for (std::size_t j = 0; j < dims[1]; ++j) {
            Complex fij = factor[0][i] * factor[1][j];
            for (std::size_t k = 0; k < dims[2]; ++k) {
                Complex fijk = fij * factor[2][k];
                std::size_t row = ((i * dims[1] + j) * dims[2] + k) * dims[3];
                for (std::size_t l = 0; l < dims[3]; ++l)
                    data[row + l] *= fijk * factor[3][l];
            }
        }
    }

    return SpectralAmplitude(SpectralGrid(axes, std::move(data), L), scales, p.delta_n());
}

//---------------------------------------------------------------------------//
// Integrity checks
//---------------------------------------------------------------------------//

ParsevalResult parseval_check(PulseProfile const& p, SpectralAmplitude const& s)
{
    auto const* st = std::get_if<StaticAnisotropic>(&p.shape());
    if (!st)
        throw Error(ErrorCode::WrongVariant, "Parseval check needs a static anisotropic pulse");
    double c = p.light_speed();
    double volume = c * c * c / (st->omega1 * st->omega2 * st->omega3 * st->omega3);

    ParsevalResult r;
    // 4D radial integral: the unit 3-sphere has area 2 pi^2.
    r.real_space = p.delta_n() * p.delta_n() * volume * 2.0 * pi * pi *
                   radial_fourth_moment(p.envelope());

    if (auto const* g = s.closed_form()) {
        double width_product = 2.0 * pi * g->scales.omega1 * g->scales.omega2 *
                               g->scales.omega3 * g->scales.omega3 /
                               (g->scales.light_speed * g->scales.light_speed *
                                g->scales.light_speed);
        double peak = g->peak();
        // \int exp(-x^2 / 2 sigma^2) dx = sqrt(2 pi) sigma per axis
        r.spectral = peak * peak * width_product * 2.0 * pi / std::pow(2.0 * pi, 4);
    } else {
        auto const& grid = *s.grid();
        std::vector<double> sq(grid.values().size());
        for (std::size_t i = 0; i < sq.size(); ++i)
            sq[i] = std::norm(grid.values()[i]);
        double cell = 1.0;
        for (auto const& a : grid.axes())
            cell *= a.spacing;
        r.spectral = detail::pairwise_sum(sq) * cell / std::pow(2.0 * pi, 4);
    }
    r.discrepancy = r.real_space > 0.0 ? std::abs(r.real_space - r.spectral) / r.real_space
                                       : std::abs(r.spectral);
    r.flagged = r.discrepancy > parseval_tolerance;
    return r;
}

double hermitian_error(SpectralGrid const& g)
{
    auto const& ax = g.axes();
    double peak = g.peak();
    if (peak == 0.0)
        return 0.0;
    double worst = 0.0;
    std::array<std::ptrdiff_t, 4> idx{};
    for (idx[0] = -ax[0].half(); idx[0] <= ax[0].half(); ++idx[0])
        for (idx[1] = -ax[1].half(); idx[1] <= ax[1].half(); ++idx[1])
            for (idx[2] = -ax[2].half(); idx[2] <= ax[2].half(); ++idx[2])
                for (idx[3] = -ax[3].half(); idx[3] <= ax[3].half(); ++idx[3]) {
                    std::array<std::ptrdiff_t, 4> mirror{-idx[0], -idx[1], -idx[2], -idx[3]};
                    Complex a = g.values()[g.flat_index(idx)];
                    Complex b = g.values()[g.flat_index(mirror)];
                    worst = std::max(worst, std::abs(b - std::conj(a)));
                }
    return worst / peak;
}

double max_relative_error(SpectralGrid const& g, GaussianTransform const& exact, double floor)
{
    auto const& ax = g.axes();
    double threshold = floor * exact.peak();
    double worst = 0.0;
    std::array<std::ptrdiff_t, 4> idx{};
    for (idx[0] = -ax[0].half(); idx[0] <= ax[0].half(); ++idx[0])
        for (idx[1] = -ax[1].half(); idx[1] <= ax[1].half(); ++idx[1])
            for (idx[2] = -ax[2].half(); idx[2] <= ax[2].half(); ++idx[2])
                for (idx[3] = -ax[3].half(); idx[3] <= ax[3].half(); ++idx[3]) {
                    double w = g.coordinate(0, idx[0]);
                    Vec3 k{g.coordinate(1, idx[1]), g.coordinate(2, idx[2]),
                           g.coordinate(3, idx[3])};
                    Complex ref = exact(w, k);
                    if (std::abs(ref) < threshold)
                        continue;
                    Complex got = g.values()[g.flat_index(idx)];
                    worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
                }
    return worst;
}

}  // namespace qvrad
