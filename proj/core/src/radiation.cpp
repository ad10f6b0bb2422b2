#include "qvrad/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

#include "qvrad/constants.hpp"
#include "qvrad/detail/gaussian_tails.hpp"
#include "qvrad/detail/quadrature.hpp"
#include "qvrad/error.hpp"

namespace qvrad {

namespace {

constexpr double pi = constants::pi;
constexpr double two_pi = constants::two_pi;

//---------------------------------------------------------------------------//
// Closed-form static pulses
//
// For a fixed total momentum K (|K| = d) the pair integral over k at fixed
// s = |k| + |k'| reduces to the prolate-spheroid weight w(s, d). The
// closed-form spectrum depends on s only through exp(-s^2 / 2 a1^2), so the
// s integral is a combination of Gaussian tail moments, and the direction of
// K enters through a one-dimensional angular factor. What remains is a
// single radial integral over d.
//---------------------------------------------------------------------------//

struct StaticSetup
{
    double c = 1.0;
    double a1 = 1.0;
    double a2 = 1.0;
    double a3 = 1.0;
    double beta = 0.5;
    double prefactor = 0.0;  // multiplies the reduced d integral
    double d_max = 1.0;
};

void check_medium(double light_speed, double n0)
{
    if (!(n0 >= 1.0) || std::abs(light_speed * n0 - 1.0) > 1e-12)
        throw Error(ErrorCode::Domain, "spectrum light speed does not match n0 = " +
                                           std::to_string(n0));
}

StaticSetup static_setup(GaussianTransform const& g, double n0)
{
    check_medium(g.scales.light_speed, n0);
    StaticSetup st;
    st.c = g.scales.light_speed;
    st.a1 = g.scales.omega1 / st.c;
    st.a2 = g.scales.omega2 / st.c;
    st.a3 = g.scales.omega3 / st.c;
    st.beta = 0.5 / (st.a1 * st.a1);
    double peak = g.peak();
    st.prefactor = peak * peak * st.c * st.c / std::pow(n0, 6) * (pi / 16.0) /
                   std::pow(two_pi, 6);
    st.d_max = 10.0 * std::min(st.a1, std::max(st.a2, st.a3));
    return st;
}

//! \int dOmega_K exp(-c^2 Kx^2 / 2 Omega2^2 - c^2 K_perp^2 / 2 Omega3^2) at |K| = d
double angular_factor(double d, double a2, double a3)
{
    double d2 = d * d;
    double gamma = 0.5 * d2 * (1.0 / (a2 * a2) - 1.0 / (a3 * a3));
    if (std::abs(gamma) < 1e-6) {
        double base = std::exp(-0.5 * d2 / (a3 * a3));
        return two_pi * base * 2.0 * (1.0 - gamma / 3.0 + gamma * gamma / 10.0);
    }
    if (gamma > 0.0) {
        double base = std::exp(-0.5 * d2 / (a3 * a3));
        double r = std::sqrt(gamma);
        return two_pi * base * std::sqrt(pi) / r * std::erf(r);
    }
    // Oblate case: exp(-d^2/2a2^2) * 2 \int_0^1 exp(-g (1 - mu^2)) dmu
    double g = -gamma;
    auto f = [g](double mu) { return std::exp(-g * (1.0 - mu * mu)); };
    std::vector<double> bp{0.0, 1.0};
    if (g > 1.0)
        bp.push_back(1.0 - 1.0 / g);
    if (g > 10.0)
        bp.push_back(1.0 - 10.0 / g);
    auto r = detail::integrate_panels(f, bp, 1e-13, 200'000);
    return two_pi * std::exp(-0.5 * d2 / (a2 * a2)) * 2.0 * r.value;
}

std::vector<double> radial_breakpoints(StaticSetup const& st, double upper, double scale = 1.0)
{
    std::vector<double> bp{0.0, upper};
    for (double a : {st.a1 * scale, st.a2, st.a3}) {
        for (double m : {0.3, 1.0, 3.0}) {
            double x = m * a;
            if (x > 0.0 && x < upper)
                bp.push_back(x);
        }
    }
    return bp;
}

//! Tail weight of pairs with s >= x at total momentum d.
detail::ShellTails tails_from(StaticSetup const& st, double x, double d)
{
    return detail::shell_tails(detail::gaussian_tail_moments(x, st.beta), d);
}

struct ReducedIntegrals
{
    detail::QuadratureResult probability;
    detail::QuadratureResult energy;  // \int s (...) in wavenumber units
};

ReducedIntegrals reduced_integrals(StaticSetup const& st, IntegratorSpec const& spec,
                                   bool want_energy)
{
    auto bp = radial_breakpoints(st, st.d_max);
    ReducedIntegrals out;
    out.probability = detail::integrate_panels(
        [&](double d) { return d * d * angular_factor(d, st.a2, st.a3) * tails_from(st, d, d).probability; },
        bp, spec.tolerance, spec.max_evaluations);
    if (want_energy) {
        out.energy = detail::integrate_panels(
            [&](double d) { return d * d * angular_factor(d, st.a2, st.a3) * tails_from(st, d, d).energy; },
            bp, spec.tolerance, spec.max_evaluations);
    }
    return out;
}

IntegratorInfo quadrature_info(IntegratorSpec const& spec, std::size_t evaluations)
{
    IntegratorInfo info;
    info.method = IntegrationMethod::Quadrature;
    info.evaluations = evaluations;
    info.tolerance = spec.tolerance;
    return info;
}

//---------------------------------------------------------------------------//
// Sampled spectra: Gauss-Legendre over K (ellipsoidal polar) and s = |k| + |k'|
//---------------------------------------------------------------------------//

using GaussRule = boost::math::quadrature::gauss<double, 12>;

//! Composite Gauss-Legendre nodes and weights on [a, b].
void composite_rule(double a, double b, std::size_t panels, std::vector<double>& x,
                    std::vector<double>& w)
{
    x.clear();
    w.clear();
    auto const& abscissa = GaussRule::abscissa();
    auto const& weights = GaussRule::weights();
    double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        double center = a + (static_cast<double>(p) + 0.5) * h;
        double half = 0.5 * h;
        for (std::size_t j = 0; j < abscissa.size(); ++j) {
            if (abscissa[j] == 0.0) {
                x.push_back(center);
                w.push_back(half * weights[j]);
                continue;
            }
            x.push_back(center - half * abscissa[j]);
            w.push_back(half * weights[j]);
            x.push_back(center + half * abscissa[j]);
            w.push_back(half * weights[j]);
        }
    }
}

struct GridSums
{
    double probability = 0.0;
    double energy = 0.0;  // \int s (...)
    std::size_t evaluations = 0;
};

//! K runs over the ellipsoid K_i = rho kmax_i n_i, rho in [0, 1], so |K| stays
//! smooth along every quadrature line; s = |k| + |k'| covers [|K|, s_max].
//! The semi-axes follow the source scales, clipped to the lattice.
GridSums grid_sums(SpectralGrid const& g, SourceScales const& sc, std::size_t level)
{
    auto const& ax = g.axes();
    double c = sc.light_speed;
    double cutoff = envelope_spectral_cutoff(sc.envelope);
    double s_max = std::min(ax[0].max_value(), cutoff * sc.omega1) / c;
    std::array<double, 3> rates{sc.omega2, sc.omega3, sc.omega3};
    Vec3 semi{};
    for (std::size_t i = 0; i < 3; ++i)
        semi[i] = std::min({ax[i + 1].max_value(), cutoff * rates[i] / c, s_max});
    double jacobian = semi[0] * semi[1] * semi[2];

    std::vector<double> rx, rw, mx, mw, sx, sw;
    composite_rule(0.0, 1.0, level, rx, rw);
    composite_rule(-1.0, 1.0, level, mx, mw);
    std::size_t n_phi = 12 * level;
    double w_phi = two_pi / static_cast<double>(n_phi);

    GridSums out;
    std::vector<double> shell_p, shell_e;
    for (std::size_t r = 0; r < rx.size(); ++r) {
        double sum_p = 0.0;
        double sum_e = 0.0;
        for (std::size_t m = 0; m < mx.size(); ++m) {
            double sin_t = std::sqrt(std::max(0.0, 1.0 - mx[m] * mx[m]));
            for (std::size_t f = 0; f < n_phi; ++f) {
                double phi = w_phi * (static_cast<double>(f) + 0.5);
                Vec3 K{rx[r] * semi[0] * mx[m], rx[r] * semi[1] * sin_t * std::cos(phi),
                       rx[r] * semi[2] * sin_t * std::sin(phi)};
                double d = norm(K);
                if (d >= s_max)
                    continue;
                composite_rule(d, s_max, level, sx, sw);
                double line_p = 0.0;
                double line_e = 0.0;
                for (std::size_t q = 0; q < sx.size(); ++q) {
                    ++out.evaluations;
                    auto v = g.interpolate(c * sx[q], K);
                    if (!v)
                        continue;
                    double y = std::norm(*v) * detail::spheroid_shell_weight(sx[q], d) * sw[q];
                    line_p += y;
                    line_e += y * sx[q];
                }
                sum_p += mw[m] * line_p;
                sum_e += mw[m] * line_e;
            }
        }
        double wr = rw[r] * rx[r] * rx[r] * w_phi * jacobian;
        shell_p.push_back(wr * sum_p);
        shell_e.push_back(wr * sum_e);
    }
    out.probability = std::accumulate(shell_p.begin(), shell_p.end(), 0.0);
    out.energy = std::accumulate(shell_e.begin(), shell_e.end(), 0.0);
    return out;
}

struct PairIntegrals
{
    double probability = 0.0;
    double probability_error = 0.0;
    double energy = 0.0;  // \int (omega_k + omega_k') |A|^2
    double energy_error = 0.0;
    std::size_t evaluations = 0;
};

PairIntegrals pair_integrals(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec,
                             bool want_energy)
{
    PairIntegrals out;
    if (auto const* g = s.closed_form()) {
        StaticSetup st = static_setup(*g, n0);
        auto r = reduced_integrals(st, spec, want_energy);
        out.probability = st.prefactor * r.probability.value;
        out.probability_error = st.prefactor * r.probability.error;
        out.energy = st.c * st.prefactor * r.energy.value;
        out.energy_error = st.c * st.prefactor * r.energy.error;
        out.evaluations = r.probability.evaluations + r.energy.evaluations;
        return out;
    }
    double c = s.light_speed();
    check_medium(c, n0);
    SpectralGrid const& grid = *s.grid();
    double pref = c * c / std::pow(n0, 6) * (pi / 16.0) / std::pow(two_pi, 6);
    GridSums fine = grid_sums(grid, s.scales(), 3);
    GridSums coarse = grid_sums(grid, s.scales(), 2);
    out.probability = pref * fine.probability;
    out.probability_error = pref * std::abs(fine.probability - coarse.probability);
    out.energy = c * pref * fine.energy;
    out.energy_error = c * pref * std::abs(fine.energy - coarse.energy);
    out.evaluations = fine.evaluations + coarse.evaluations;
    double rel = out.probability > 0.0 ? out.probability_error / out.probability : 0.0;
    if (rel > std::max(spec.tolerance, 1e-3)) {
        throw Error(ErrorCode::Accuracy, "grid quadrature relative error " + std::to_string(rel) +
                                             " exceeds tolerance");
    }
    return out;
}

Estimate from_mc(McEstimate const& m, IntegratorSpec const& spec)
{
    Estimate e;
    e.value = m.value;
    e.error = m.std_error;
    e.info.method = IntegrationMethod::MonteCarlo;
    e.info.samples = m.samples;
    e.info.seed = spec.seed;
    e.info.evaluations = m.samples;
    return e;
}

void require_samples(IntegratorSpec const& spec)
{
    if (spec.samples == 0)
        throw Error(ErrorCode::ZeroEffectiveSamples, "Monte Carlo requested with zero samples");
}

}  // namespace

//---------------------------------------------------------------------------//

PairMode::PairMode(Vec3 k, Vec3 k_prime) : k_(k), k_prime_(k_prime)
{
    if (!is_finite(k) || !is_finite(k_prime) || norm(k) == 0.0 || norm(k_prime) == 0.0)
        throw Error(ErrorCode::Domain, "pair modes need finite, nonzero wavenumbers");
}

double pair_amplitude_sq(SpectralAmplitude const& s, PairMode const& m, double n0)
{
    check_medium(s.light_speed(), n0);
    double w = m.omega(n0);
    double wp = m.omega_prime(n0);
    // Sum k + k' is formed componentwise in a fixed order, so the result is
    // symmetric under exchange bit for bit.
    Vec3 total{m.k()[0] + m.k_prime()[0], m.k()[1] + m.k_prime()[1], m.k()[2] + m.k_prime()[2]};
    Complex v = s.value(w + wp, total);
    return w * wp / std::pow(n0, 6) * std::norm(v);
}

std::string to_string(IntegrationMethod m)
{
    return m == IntegrationMethod::Quadrature ? "quadrature" : "monte_carlo";
}

IntegrationMethod integration_method_from_string(std::string const& name)
{
    if (name == "quadrature")
        return IntegrationMethod::Quadrature;
    if (name == "monte_carlo")
        return IntegrationMethod::MonteCarlo;
    throw Error(ErrorCode::Config, "unknown integration method '" + name + "'");
}

std::string to_string(Observable o)
{
    switch (o) {
    case Observable::Probability: return "P";
    case Observable::MeanEnergy: return "E";
    case Observable::TotalEnergy: return "total_energy";
    case Observable::Rate: return "rate";
    }
    return "unknown";
}

double Histogram::total() const
{
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

Estimate total_probability(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec)
{
    if (spec.method == IntegrationMethod::MonteCarlo) {
        require_samples(spec);
        return from_mc(mc_oracle(s, n0, spec.seed, spec.samples, Observable::Probability, spec.workers), spec);
    }
    auto r = pair_integrals(s, n0, spec, false);
    return {r.probability, r.probability_error, quadrature_info(spec, r.evaluations)};
}

Estimate mean_photon_energy(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec)
{
    if (s.delta_n() == 0.0)
        throw Error(ErrorCode::UndefinedMean, "mean photon energy is undefined when P = 0");
    if (spec.method == IntegrationMethod::MonteCarlo) {
        require_samples(spec);
        return from_mc(mc_oracle(s, n0, spec.seed, spec.samples, Observable::MeanEnergy, spec.workers), spec);
    }
    auto r = pair_integrals(s, n0, spec, true);
    if (r.probability <= 0.0)
        throw Error(ErrorCode::UndefinedMean, "mean photon energy is undefined when P = 0");
    double mean = 0.5 * r.energy / r.probability;
    double rel = r.energy_error / r.energy + r.probability_error / r.probability;
    return {mean, mean * rel, quadrature_info(spec, r.evaluations)};
}

Estimate total_energy(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec)
{
    if (spec.method == IntegrationMethod::MonteCarlo) {
        require_samples(spec);
        return from_mc(mc_oracle(s, n0, spec.seed, spec.samples, Observable::TotalEnergy, spec.workers), spec);
    }
    auto r = pair_integrals(s, n0, spec, true);
    return {r.energy, r.energy_error, quadrature_info(spec, r.evaluations)};
}

//---------------------------------------------------------------------------//
// Pair correlation
//---------------------------------------------------------------------------//

namespace {

std::vector<double> uniform_edges(double lo, double hi, std::size_t bins)
{
    std::vector<double> edges(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
    edges.back() = hi;
    return edges;
}

//! Weight of pairs with chi <= x, unnormalized.
detail::QuadratureResult chi_cumulative(StaticSetup const& st, double x, IntegratorSpec const& spec,
                                        double abs_floor)
{
    if (x <= 0.0)
        return {};
    double upper = std::min(st.d_max, 10.0 * st.a1 * x);
    auto bp = radial_breakpoints(st, upper, x);
    return detail::integrate_panels(
        [&](double d) {
            if (d == 0.0)
                return 0.0;
            return d * d * angular_factor(d, st.a2, st.a3) * tails_from(st, d / x, d).probability;
        },
        bp, spec.tolerance, spec.max_evaluations, abs_floor);
}

}  // namespace

CorrelationSpectrum pair_correlation(SpectralAmplitude const& s, double n0,
                                     IntegratorSpec const& spec, std::size_t bins)
{
    if (bins == 0)
        throw Error(ErrorCode::Domain, "pair_correlation needs at least one bin");
    auto const* g = s.closed_form();
    if (g == nullptr)
        throw Error(ErrorCode::NotClosedForm, "pair correlation needs a closed-form spectrum");
    if (s.delta_n() == 0.0)
        throw Error(ErrorCode::UndefinedMean, "pair correlation is undefined when P = 0");
    StaticSetup st = static_setup(*g, n0);
    auto total = reduced_integrals(st, spec, false).probability;
    double floor = 1e-3 * spec.tolerance * total.value;

    CorrelationSpectrum out;
    Histogram& h = out.histogram;
    h.variable = "chi";
    h.edges = uniform_edges(0.0, 1.0, bins);
    std::vector<detail::QuadratureResult> cumulative(bins + 1);
    for (std::size_t i = 1; i < bins; ++i)
        cumulative[i] = chi_cumulative(st, h.edges[i], spec, floor);
    cumulative[bins] = total;
    for (std::size_t i = 0; i < bins; ++i) {
        double w = (cumulative[i + 1].value - cumulative[i].value) / total.value;
        double e = (cumulative[i + 1].error + cumulative[i].error) / total.value;
        h.weights.push_back(std::max(w, 0.0));
        h.errors.push_back(e);
    }

    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 60 && hi - lo > 1e-10; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (chi_cumulative(st, mid, spec, floor).value < 0.5 * total.value)
            lo = mid;
        else
            hi = mid;
    }
    out.median = 0.5 * (lo + hi);
    return out;
}

EmissionReport radiate(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec,
                       std::size_t angular_bins, std::size_t correlation_bins)
{
    EmissionReport r;
    r.total_probability = total_probability(s, n0, spec);
    r.total_energy = total_energy(s, n0, spec);
    if (r.total_probability.value > 0.0)
        r.mean_photon_energy = mean_photon_energy(s, n0, spec);
    r.perturbative_warning = r.total_probability.value > probability_warn_threshold;
    if (angular_bins > 0) {
        if (s.delta_n() > 0.0) {
            IntegratorSpec mc = spec;
            r.angular = angular_spectrum(s, n0, mc, angular_bins);
        } else {
            r.angular.variable = "cos_theta";
            r.angular.edges = uniform_edges(-1.0, 1.0, angular_bins);
            r.angular.weights.assign(angular_bins, 0.0);
            r.angular.errors.assign(angular_bins, 0.0);
        }
    }
    if (correlation_bins > 0 && s.closed_form() != nullptr && s.delta_n() > 0.0) {
        auto corr = pair_correlation(s, n0, spec, correlation_bins);
        r.correlation = std::move(corr.histogram);
        r.correlation_median = corr.median;
    }
    return r;
}

//---------------------------------------------------------------------------//
// Monopole estimate
//---------------------------------------------------------------------------//

namespace {

//! M(t) = scale * p(u) exp(-u^2), u = Omega1 (t - t0); p in ascending powers.
struct MonopoleForm
{
    double scale = 0.0;
    double omega1 = 1.0;
    double t0 = 0.0;
    std::vector<double> poly;
};

std::optional<MonopoleForm> monopole_form(PulseProfile const& p)
{
    if (!p.is<StaticAnisotropic>())
        return std::nullopt;  // constant in time
    auto const& s = p.as<StaticAnisotropic>();
    double c = p.light_speed();
    MonopoleForm m;
    m.omega1 = s.omega1;
    m.t0 = s.t0;
    double volume = std::pow(std::sqrt(pi) * c, 3) / (s.omega2 * s.omega3 * s.omega3);
    m.scale = p.delta_n() * volume;
    switch (p.envelope()) {
    case Envelope::Gaussian: m.poly = {1.0}; break;
    case Envelope::GaussianPolynomial: m.poly = {2.5, 0.0, 1.0}; break;
    }
    return m;
}

//! d/du [p(u) e^{-u^2}] = (p' - 2 u p) e^{-u^2}
std::vector<double> differentiate(std::vector<double> const& p)
{
    std::vector<double> out(p.size() + 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i)
        out[i - 1] += static_cast<double>(i) * p[i];
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i + 1] -= 2.0 * p[i];
    return out;
}

double eval_poly(std::vector<double> const& p, double u)
{
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        acc = acc * u + *it;
    return acc;
}

}  // namespace

double monopole_moment(PulseProfile const& p, double t)
{
    auto m = monopole_form(p);
    if (!m) {
        double c = p.light_speed();
        double omega = p.is<UniformlyMoving>() ? p.as<UniformlyMoving>().omega
                                                : p.as<Accelerated>().omega;
        double shape = p.envelope() == Envelope::Gaussian ? 1.0 : 2.5;
        return p.delta_n() * std::pow(std::sqrt(pi) * c / omega, 3) * shape;
    }
    double u = m->omega1 * (t - m->t0);
    return m->scale * eval_poly(m->poly, u) * std::exp(-u * u);
}

double monopole_moment_fourth_derivative(PulseProfile const& p, double t)
{
    auto m = monopole_form(p);
    if (!m)
        return 0.0;
    auto q = m->poly;
    for (int i = 0; i < 4; ++i)
        q = differentiate(q);
    double u = m->omega1 * (t - m->t0);
    return m->scale * std::pow(m->omega1, 4) * eval_poly(q, u) * std::exp(-u * u);
}

MonopoleEstimate monopole_energy_estimate(PulseProfile const& p)
{
    MonopoleEstimate out;
    auto m = monopole_form(p);
    if (!m)
        return out;
    auto const& s = p.as<StaticAnisotropic>();
    double ratio = s.omega1 / std::min(s.omega2, s.omega3);
    if (ratio > point_like_warn_ratio) {
        out.warnings.push_back({Warning::Severity::Warning, "not_point_like",
                                "Omega1 / min(Omega2, Omega3) = " + std::to_string(ratio) +
                                    " exceeds " + std::to_string(point_like_warn_ratio)});
    }
    auto q = m->poly;
    for (int i = 0; i < 4; ++i)
        q = differentiate(q);
    // \int q(u)^2 e^{-2u^2} du from the even moments
    // \int u^{2j} e^{-2u^2} du = sqrt(pi/2) (2j-1)!! / 4^j
    std::vector<double> sq(2 * q.size() - 1, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            sq[i + j] += q[i] * q[j];
    double integral = 0.0;
    double moment = std::sqrt(pi / 2.0);
    for (std::size_t j = 0; 2 * j < sq.size(); ++j) {
        integral += sq[2 * j] * moment;
        moment *= static_cast<double>(2 * j + 1) / 4.0;
    }
    out.value = m->scale * m->scale * std::pow(m->omega1, 7) * integral;
    return out;
}

//---------------------------------------------------------------------------//
// Uniformly moving pulses
//---------------------------------------------------------------------------//

namespace {

//! Polar angle of photon k about the velocity for the spheroid point
//! (xi0, eta, phi) when K makes cosine mu with the velocity.
double photon_polar_angle(double mu, double xi0, double eta, double phi)
{
    double sin_mu = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    double transverse = std::sqrt(std::max(0.0, (xi0 * xi0 - 1.0) * (1.0 - eta * eta)));
    double cos_theta = ((1.0 + xi0 * eta) * mu + transverse * std::cos(phi) * sin_mu) / (xi0 + eta);
    return std::acos(std::clamp(cos_theta, -1.0, 1.0));
}

struct AngleSample
{
    double theta;
    double weight;
};

std::vector<AngleSample> angle_samples(double beta_ratio)
{
    std::vector<double> mx, mw, ex, ew, px, pw;
    composite_rule(1.0 / beta_ratio, 1.0, 6, mx, mw);
    composite_rule(-1.0, 1.0, 6, ex, ew);
    composite_rule(0.0, pi, 4, px, pw);
    std::vector<AngleSample> out;
    out.reserve(mx.size() * ex.size() * px.size());
    for (std::size_t i = 0; i < mx.size(); ++i) {
        double xi0 = beta_ratio * mx[i];
        for (std::size_t j = 0; j < ex.size(); ++j) {
            double q = xi0 * xi0 - ex[j] * ex[j];
            double w_ij = mw[i] * ew[j] * q * q;
            for (std::size_t l = 0; l < px.size(); ++l)
                out.push_back({photon_polar_angle(mx[i], xi0, ex[j], px[l]), w_ij * pw[l]});
        }
    }
    return out;
}

}  // namespace

RateReport emission_rate(FactorizedMovingSpectrum const& fs, double n0, IntegratorSpec const& spec,
                         std::size_t angle_bins)
{
    check_medium(fs.light_speed, n0);
    RateReport r;
    r.info = quadrature_info(spec, 0);
    double c = fs.light_speed;
    double v = norm(fs.velocity);
    r.angle_table.variable = "theta";
    std::size_t n_bins = std::max<std::size_t>(angle_bins, 1);
    r.angle_table.edges = uniform_edges(0.0, pi, n_bins);
    r.angle_table.weights.assign(n_bins, 0.0);
    r.angle_table.errors.assign(n_bins, 0.0);
    if (v <= c) {
        r.forbidden = true;
        r.reason = "kinematically forbidden";
        return r;
    }

    if (spec.method == IntegrationMethod::MonteCarlo) {
        require_samples(spec);
        auto m = mc_oracle(fs, n0, spec.seed, spec.samples, Observable::Rate, spec.workers);
        r.rate = m.value;
        r.rate_error = m.std_error;
        r.info = from_mc(m, spec).info;
    } else {
        // P/T = (2pi)^-6 (c^2/n0^6) (pi/16) (2pi/c) \int d^3K |g~(K)|^2 w(v.K/c, |K|)
        // with the radial integral \int k^6 exp(-k^2 / 2 sigma^2) = 15 sigma^7 sqrt(pi/2)
        // and the polar integral over mu in [c/v, 1] of 2 xi^4 - 4/3 xi^2 + 2/5, xi = v mu / c.
        double sigma = fs.omega / c;
        double peak = fs.spatial_peak();
        double b = v / c;
        auto antiderivative = [](double xi) {
            double x2 = xi * xi;
            return xi * (0.4 * x2 * x2 - (4.0 / 9.0) * x2 + 0.4);
        };
        double polar = (antiderivative(b) - antiderivative(1.0)) / b;
        double radial = 15.0 * std::pow(sigma, 7) * std::sqrt(pi / 2.0);
        double shape = two_pi * polar * radial * peak * peak;
        r.rate = std::pow(two_pi, -6) * c * c / std::pow(n0, 6) * (pi / 16.0) * (two_pi / c) * shape;
        r.rate_error = 0.0;
        r.info.evaluations = 1;
    }

    auto samples = angle_samples(v / c);
    r.info.evaluations += samples.size();
    double weight_total = 0.0;
    for (auto const& s : samples)
        weight_total += s.weight;
    auto& table = r.angle_table;
    for (auto const& s : samples) {
        auto bin = static_cast<std::size_t>(s.theta / pi * static_cast<double>(table.bins()));
        bin = std::min(bin, table.bins() - 1);
        table.weights[bin] += s.weight / weight_total * r.rate;
    }
    std::sort(samples.begin(), samples.end(),
              [](AngleSample const& a, AngleSample const& b) { return a.theta < b.theta; });
    double target = theta_max_percentile * weight_total;
    double acc = 0.0;
    double theta = samples.back().theta;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double next = acc + samples[i].weight;
        if (next >= target) {
            // interpolate the empirical CDF between neighbouring nodes
            double prev_theta = i == 0 ? 0.0 : samples[i - 1].theta;
            double frac = (target - acc) / samples[i].weight;
            theta = prev_theta + frac * (samples[i].theta - prev_theta);
            break;
        }
        acc = next;
    }
    r.theta_max = theta;
    return r;
}

}  // namespace qvrad
