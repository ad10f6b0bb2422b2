#include "qvrad/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qvrad/error.hpp"

namespace qvrad {

namespace {

void require(bool ok, std::string const& what)
{
    if (!ok)
        throw Error(ErrorCode::InvalidProfile, what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

std::string format(double x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

}  // namespace

void MaterialParams::validate() const
{
    require(std::isfinite(n0) && n0 >= 1.0, "background index n0 must be >= 1");
    if (kerr_n2)
        require(std::isfinite(*kerr_n2) && *kerr_n2 >= 0.0, "Kerr coefficient must be >= 0");
}

std::string to_string(Envelope e)
{
    switch (e) {
    case Envelope::Gaussian: return "gaussian";
    case Envelope::GaussianPolynomial: return "gaussian_polynomial";
    }
    return "unknown";
}

Envelope envelope_from_string(std::string const& name)
{
    if (name == "gaussian")
        return Envelope::Gaussian;
    if (name == "gaussian_polynomial")
        return Envelope::GaussianPolynomial;
    throw Error(ErrorCode::InvalidProfile, "unknown envelope '" + name + "'");
}

double envelope_value(Envelope e, double rho)
{
    double r2 = rho * rho;
    switch (e) {
    case Envelope::Gaussian: return std::exp(-r2);
    case Envelope::GaussianPolynomial: return (1.0 + r2) * std::exp(-r2);
    }
    return 0.0;
}

double envelope_derivative(Envelope e, double rho)
{
    double r2 = rho * rho;
    switch (e) {
    case Envelope::Gaussian: return -2.0 * rho * std::exp(-r2);
    case Envelope::GaussianPolynomial: return -2.0 * rho * r2 * std::exp(-r2);
    }
    return 0.0;
}

double envelope_spectral_cutoff(Envelope e)
{
    switch (e) {
    // exp(-kappa^2/4) = 1e-12
    case Envelope::Gaussian: return 10.513;
    // |1 - kappa^2/12| exp(-kappa^2/4) = 1e-12
    case Envelope::GaussianPolynomial: return 10.93;
    }
    return 0.0;
}

//---------------------------------------------------------------------------//

Trajectory::Trajectory(Kind kind) : kind_(std::move(kind))
{
    std::visit(
        [](auto const& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, UniformVelocity>) {
                require(is_finite(k.velocity) && is_finite(k.start), "trajectory must be finite");
            } else if constexpr (std::is_same_v<T, UniformAcceleration>) {
                require(is_finite(k.acceleration) && is_finite(k.initial_velocity) &&
                            is_finite(k.start),
                        "trajectory must be finite");
            } else {
                require(k.times.size() >= 2, "tabulated trajectory needs at least two samples");
                require(k.times.size() == k.positions.size(),
                        "tabulated trajectory: times and positions differ in length");
                for (std::size_t i = 0; i < k.times.size(); ++i) {
                    require(std::isfinite(k.times[i]) && is_finite(k.positions[i]),
                            "tabulated trajectory must be finite");
                    if (i > 0)
                        require(k.times[i] > k.times[i - 1],
                                "tabulated trajectory times must be strictly increasing");
                }
            }
        },
        kind_);
}

Vec3 Trajectory::position(double t) const
{
    return std::visit(
        [t](auto const& k) -> Vec3 {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, UniformVelocity>) {
                return k.start + t * k.velocity;
            } else if constexpr (std::is_same_v<T, UniformAcceleration>) {
                return k.start + t * k.initial_velocity + (0.5 * t * t) * k.acceleration;
            } else {
                if (t <= k.times.front())
                    return k.positions.front();
                if (t >= k.times.back())
                    return k.positions.back();
                auto it = std::upper_bound(k.times.begin(), k.times.end(), t);
                std::size_t i = static_cast<std::size_t>(it - k.times.begin()) - 1;
                double w = (t - k.times[i]) / (k.times[i + 1] - k.times[i]);
                return (1.0 - w) * k.positions[i] + w * k.positions[i + 1];
            }
        },
        kind_);
}

Vec3 Trajectory::velocity(double t) const
{
    return std::visit(
        [t](auto const& k) -> Vec3 {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, UniformVelocity>) {
                return k.velocity;
            } else if constexpr (std::is_same_v<T, UniformAcceleration>) {
                return k.initial_velocity + t * k.acceleration;
            } else {
                if (t < k.times.front() || t > k.times.back())
                    return Vec3{};
                auto it = std::upper_bound(k.times.begin(), k.times.end(), t);
                std::size_t i = std::min(static_cast<std::size_t>(it - k.times.begin()),
                                         k.times.size() - 1) - 1;
                double dt = k.times[i + 1] - k.times[i];
                return (1.0 / dt) * (k.positions[i + 1] - k.positions[i]);
            }
        },
        kind_);
}

//---------------------------------------------------------------------------//

PulseProfile::PulseProfile(double delta_n, MaterialParams material, Envelope envelope,
                           Shape shape)
    : delta_n_(delta_n), material_(material), envelope_(envelope), shape_(std::move(shape))
{
    require(std::isfinite(delta_n_) && delta_n_ >= 0.0, "amplitude delta_n must be >= 0");
    material_.validate();
    std::visit(
        [](auto const& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, StaticAnisotropic>) {
                require(positive_finite(s.omega1) && positive_finite(s.omega2) &&
                            positive_finite(s.omega3),
                        "rates omega1, omega2, omega3 must be > 0");
                require(std::isfinite(s.t0) && is_finite(s.center), "pulse center must be finite");
            } else if constexpr (std::is_same_v<T, UniformlyMoving>) {
                require(positive_finite(s.omega), "rate omega must be > 0");
                require(is_finite(s.velocity) && is_finite(s.center),
                        "velocity and center must be finite");
            } else {
                require(positive_finite(s.omega), "rate omega must be > 0");
            }
        },
        shape_);
}

PulseProfile PulseProfile::one_parameter(double delta_n, double omega, double n0)
{
    return anisotropic(delta_n, omega, omega, omega, n0);
}

PulseProfile PulseProfile::anisotropic(double delta_n, double omega1, double omega2,
                                       double omega3, double n0)
{
    return PulseProfile(delta_n, MaterialParams{n0, std::nullopt}, Envelope::Gaussian,
                        StaticAnisotropic{omega1, omega2, omega3, 0.0, {}});
}

PulseProfile PulseProfile::moving(double delta_n, double omega, Vec3 velocity, double n0)
{
    return PulseProfile(delta_n, MaterialParams{n0, std::nullopt}, Envelope::Gaussian,
                        UniformlyMoving{omega, velocity, {}});
}

PulseProfile PulseProfile::with_delta_n(double delta_n) const
{
    return PulseProfile(delta_n, material_, envelope_, shape_);
}

PulseProfile PulseProfile::with_shape(Shape shape) const
{
    return PulseProfile(delta_n_, material_, envelope_, std::move(shape));
}

double evaluate_profile(PulseProfile const& p, double t, Vec3 const& r)
{
    double inv_c = p.n0();
    double rho = std::visit(
        [&](auto const& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, StaticAnisotropic>) {
                Vec3 d = r - s.center;
                double u0 = s.omega1 * (t - s.t0);
                double u1 = s.omega2 * d[0] * inv_c;
                double u2 = s.omega3 * d[1] * inv_c;
                double u3 = s.omega3 * d[2] * inv_c;
                return std::sqrt(u0 * u0 + u1 * u1 + u2 * u2 + u3 * u3);
            } else if constexpr (std::is_same_v<T, UniformlyMoving>) {
                return s.omega * inv_c * norm(r - s.center - t * s.velocity);
            } else {
                return s.omega * inv_c * norm(r - s.trajectory.position(t));
            }
        },
        p.shape());
    return p.delta_n() * envelope_value(p.envelope(), rho);
}

//---------------------------------------------------------------------------//

bool has_errors(std::vector<Warning> const& warnings)
{
    return std::any_of(warnings.begin(), warnings.end(), [](Warning const& w) {
        return w.severity == Warning::Severity::Error;
    });
}

std::string to_string(StaticRegime r)
{
    switch (r) {
    case StaticRegime::OneParameter: return "one_parameter";
    case StaticRegime::PointLike: return "point_like";
    case StaticRegime::Cosmological: return "cosmological";
    case StaticRegime::Needle: return "needle";
    case StaticRegime::Intermediate: return "intermediate";
    }
    return "unknown";
}

StaticRegime classify_static_regime(StaticAnisotropic const& s)
{
    auto same_order = [](double a, double b) {
        return std::max(a, b) / std::min(a, b) <= same_order_ratio;
    };
    double r12 = s.omega1 / s.omega2;
    double r31 = s.omega3 / s.omega1;
    if (same_order(s.omega1, s.omega2) && same_order(s.omega1, s.omega3))
        return StaticRegime::OneParameter;
    if (same_order(s.omega2, s.omega3)) {
        if (r12 <= 1.0 / asymptotic_ratio)
            return StaticRegime::PointLike;
        if (r12 >= asymptotic_ratio)
            return StaticRegime::Cosmological;
    }
    if (r12 >= asymptotic_ratio && r31 >= asymptotic_ratio)
        return StaticRegime::Needle;
    return StaticRegime::Intermediate;
}

std::vector<Warning> validate_profile(PulseProfile const& p)
{
    std::vector<Warning> out;
    double dn = p.delta_n();
    if (dn >= perturbative_reject_threshold) {
        out.push_back({Warning::Severity::Error, "perturbativity",
                       "delta_n = " + format(dn) + " >= " +
                           format(perturbative_reject_threshold) +
                           ": first-order perturbation theory does not apply"});
    } else if (dn > perturbative_warn_threshold) {
        out.push_back({Warning::Severity::Warning, "perturbativity",
                       "delta_n = " + format(dn) + " > " + format(perturbative_warn_threshold) +
                           ": perturbative results are only indicative"});
    } else if (dn == 0.0) {
        out.push_back({Warning::Severity::Warning, "null_perturbation",
                       "delta_n = 0: no radiation is produced"});
    }

    std::visit(
        [&](auto const& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, StaticAnisotropic>) {
                if (classify_static_regime(s) == StaticRegime::Intermediate) {
                    out.push_back({Warning::Severity::Warning, "regime",
                                   "rate ratios omega1:omega2:omega3 = " + format(s.omega1) +
                                       ":" + format(s.omega2) + ":" + format(s.omega3) +
                                       " lie outside every asymptotic regime"});
                }
            } else if constexpr (std::is_same_v<T, UniformlyMoving>) {
                double v = norm(s.velocity);
                if (std::abs(v - p.light_speed()) <= 1e-12 * p.light_speed()) {
                    out.push_back({Warning::Severity::Warning, "grazing",
                                   "pulse speed equals the medium light speed"});
                }
            } else {
                auto const* ua = std::get_if<UniformAcceleration>(&s.trajectory.kind());
                double a = ua ? norm(ua->acceleration) : 0.0;
                if (!ua) {
                    out.push_back({Warning::Severity::Warning, "trajectory",
                                   "non-uniform trajectory: Unruh estimates are instantaneous "
                                   "approximations"});
                }
                if (a > 0.0 && s.omega < unruh_validity_factor * a) {
                    out.push_back({Warning::Severity::Warning, "unruh_validity",
                                   "omega = " + format(s.omega) + " is not >> |acceleration| = " +
                                       format(a) +
                                       ": the pulse width smears out its trajectory"});
                }
            }
        },
        p.shape());
    return out;
}

KerrResult kerr_delta_n(double n2, double intensity)
{
    if (!(n2 >= 0.0) || !(intensity >= 0.0) || !std::isfinite(n2) || !std::isfinite(intensity))
        throw Error(ErrorCode::Domain, "Kerr coefficient and intensity must be finite and >= 0");
    KerrResult out{n2 * intensity, {}};
    if (out.delta_n >= perturbative_warn_threshold) {
        out.warnings.push_back({Warning::Severity::Warning, "perturbativity",
                                "Kerr index change " + format(out.delta_n) +
                                    " is not small: perturbation theory is doubtful"});
    }
    return out;
}

}  // namespace qvrad
